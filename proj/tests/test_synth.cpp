#include <doctest.h>

#include <fstream>

#include "hnet/rouge.hpp"
#include "hnet/synth.hpp"
#include "hnet/text.hpp"
#include "test_util.hpp"

using namespace hnet;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void compare_trees(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::filesystem::path> rel;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a))
    if (entry.is_regular_file())
      rel.push_back(std::filesystem::relative(entry.path(), a));
  CHECK(!rel.empty());
  for (const auto& r : rel) {
    CAPTURE(r.string());
    REQUIRE(std::filesystem::exists(b / r));
    CHECK(slurp(a / r) == slurp(b / r));
  }
}

}  // namespace

TEST_CASE("generation is byte-identical for the same seed") {
  TempDir d1("synth_a");
  TempDir d2("synth_b");
  SynthSpec spec;
  spec.seed = 5;
  spec.n_clusters = 2;
  spec.embed_dim = 8;
  spec.out_dir = d1.path();
  generate_synthetic_corpus(spec);
  spec.out_dir = d2.path();
  generate_synthetic_corpus(spec);
  compare_trees(d1.path(), d2.path());

  // a different seed changes the content
  TempDir d3("synth_c");
  spec.seed = 6;
  spec.out_dir = d3.path();
  generate_synthetic_corpus(spec);
  CHECK(slurp(d1.path() / "pairs.tsv") != slurp(d3.path() / "pairs.tsv"));
}

TEST_CASE("requested cluster count is produced exactly") {
  TempDir dir("synth");
  SynthSpec spec;
  spec.seed = 1;
  spec.n_clusters = 2;
  spec.embed_dim = 8;
  spec.out_dir = dir.path();
  const SynthPaths paths = generate_synthetic_corpus(spec);
  int dirs = 0;
  for (const auto& entry : std::filesystem::directory_iterator(paths.clusters_dir))
    dirs += entry.is_directory() ? 1 : 0;
  CHECK(dirs == 2);
}

TEST_CASE("planted reference sentences label 1.0 and fillers 0.0") {
  TempDir dir("synth");
  SynthSpec spec;
  spec.seed = 9;
  spec.n_clusters = 3;
  spec.embed_dim = 8;
  spec.out_dir = dir.path();
  const SynthPaths paths = generate_synthetic_corpus(spec);

  const StopwordSet& stop = StopwordSet::default_english();
  int planted = 0, fillers = 0, partial = 0;
  for (const DocumentCluster& cluster : load_cluster_set(paths.clusters_dir)) {
    REQUIRE(!cluster.references.empty());
    const auto labels = label_sentences(cluster, stop);
    std::vector<TokenSeq> ref_sentences;
    for (const auto& ref : cluster.references)
      for (const auto& sent : ref) ref_sentences.push_back(sent);
    for (std::size_t d = 0; d < cluster.documents.size(); ++d) {
      const Document& doc = cluster.documents[d];
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        const bool verbatim =
            std::find(ref_sentences.begin(), ref_sentences.end(),
                      doc.sentences[s].tokens) != ref_sentences.end();
        if (verbatim) {
          CHECK(labels[d][s] == doctest::Approx(1.0));
          ++planted;
        } else if (labels[d][s] == 0.0) {
          ++fillers;
        } else {
          CHECK(labels[d][s] > 0.0);
          CHECK(labels[d][s] < 1.0);
          ++partial;
        }
      }
    }
  }
  CHECK(planted > 0);   // every document leads with a planted fact
  CHECK(fillers > 0);
  CHECK(partial > 0);   // paraphrases give graded targets
}

TEST_CASE("pairs carry the two relatedness levels and embeddings cover the vocabulary") {
  TempDir dir("synth");
  SynthSpec spec;
  spec.seed = 13;
  spec.n_pairs = 12;
  spec.embed_dim = 8;
  spec.out_dir = dir.path();
  const SynthPaths paths = generate_synthetic_corpus(spec);

  const auto pairs = load_pairs_tsv(paths.pairs_tsv);
  REQUIRE(pairs.size() == 12);
  int same = 0, cross = 0;
  for (const SentencePair& pair : pairs) {
    if (pair.relatedness == 5.0) ++same;
    if (pair.relatedness == 1.0) ++cross;
  }
  CHECK(same == 6);
  CHECK(cross == 6);

  const EmbeddingTable table = load_embeddings(paths.embeddings_txt, 8);
  for (const SentencePair& pair : pairs)
    for (const std::string& token : pair.sent_a.tokens) CHECK(table.has(token));
}

TEST_CASE("pretrain corpus parses and mirrors the cluster grammar") {
  TempDir dir("synth");
  SynthSpec spec;
  spec.seed = 17;
  spec.pretrain_records = 5;
  spec.sents_per_record = 7;
  spec.embed_dim = 8;
  spec.out_dir = dir.path();
  const SynthPaths paths = generate_synthetic_corpus(spec);

  const auto records = load_pretrain_jsonl(paths.pretrain_jsonl);
  REQUIRE(records.size() == 5);
  for (const PretrainRecord& record : records) {
    CHECK(record.sentences.size() == 7);
    CHECK(record.references.size() == 2);
    const DocumentCluster cluster = cluster_from_record(record);
    const auto labels = label_sentences(cluster, StopwordSet::default_english());
    CHECK(labels[0][0] == doctest::Approx(1.0));  // lead sentence is planted
  }
}

TEST_CASE("invalid spec is rejected") {
  SynthSpec spec;
  spec.out_dir = "";
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
  spec.out_dir = "/tmp/hnet_synth_invalid";
  spec.n_clusters = 0;
  CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
}
