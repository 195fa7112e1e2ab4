#include <doctest.h>

#include "hnet/rng.hpp"
#include "hnet/rouge.hpp"

using namespace hnet;

namespace {

// Independent clipped-bigram recall: position-by-position matching with
// explicit consumption, no shared code with the library path.
double brute_bigram_recall(const TokenSeq& cand, const TokenSeq& ref) {
  if (ref.size() < 2) return 0.0;
  std::vector<bool> cand_used(cand.size(), false);
  int matched = 0;
  const int ref_bigrams = static_cast<int>(ref.size()) - 1;
  for (std::size_t i = 0; i + 1 < ref.size(); ++i) {
    for (std::size_t j = 0; j + 1 < cand.size(); ++j) {
      if (!cand_used[j] && cand[j] == ref[i] && cand[j + 1] == ref[i + 1]) {
        cand_used[j] = true;
        ++matched;
        break;
      }
    }
  }
  return static_cast<double>(matched) / static_cast<double>(ref_bigrams);
}

TokenSeq random_tokens(Rng& rng, int len, int vocab) {
  TokenSeq t;
  for (int i = 0; i < len; ++i)
    t.push_back("w" + std::to_string(rng.below(static_cast<std::uint64_t>(vocab))));
  return t;
}

const StopwordSet& kNone = StopwordSet::default_english();

}  // namespace

TEST_CASE("ngram_counts hand cases") {
  const TokenSeq abab = {"a", "b", "a", "b"};
  const auto bigrams = ngram_counts(abab, 2);
  CHECK(bigrams.size() == 2);
  CHECK(bigrams.at(std::string("a") + '\x1e' + "b") == 2);
  CHECK(bigrams.at(std::string("b") + '\x1e' + "a") == 1);

  CHECK(ngram_counts(TokenSeq{"a"}, 2).empty());

  const auto unigrams = ngram_counts(TokenSeq{"a", "b"}, 1);
  CHECK(unigrams.size() == 2);
  CHECK(unigrams.at("a") == 1);
  CHECK(unigrams.at("b") == 1);
}

TEST_CASE("rouge_n hand cases") {
  const StopwordSet none = StopwordSet::empty();
  const TokenSeq cand = {"the", "cat", "sat"};
  const TokenSeq ref = {"the", "cat", "slept"};

  SUBCASE("identical candidate and reference") {
    const RougeScore s = rouge_n(cand, {cand}, 2, false, none);
    CHECK(s.recall == doctest::Approx(1.0));
    CHECK(s.precision == doctest::Approx(1.0));
    CHECK(s.f1 == doctest::Approx(1.0));
  }
  SUBCASE("unigram recall 2/3") {
    const RougeScore s = rouge_n(cand, {ref}, 1, false, none);
    CHECK(s.recall == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("bigram recall 1/2") {
    const RougeScore s = rouge_n(cand, {ref}, 2, false, none);
    CHECK(s.recall == doctest::Approx(0.5));
  }
  SUBCASE("reference with no n-grams after filtering scores zero") {
    const TokenSeq only_stopwords = {"the", "of"};
    const RougeScore s =
        rouge_n(cand, {only_stopwords}, 2, true, StopwordSet::default_english());
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
  }
}

TEST_CASE("rouge_n properties over random token sequences") {
  Rng rng(31);
  const StopwordSet none = StopwordSet::empty();
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const TokenSeq x = random_tokens(rng, n + static_cast<int>(rng.below(10)), 5);
    const TokenSeq y = random_tokens(rng, 2 + static_cast<int>(rng.below(10)), 5);
    const TokenSeq z = random_tokens(rng, 2 + static_cast<int>(rng.below(10)), 5);

    // self-similarity is exactly 1
    const RougeScore self = rouge_n(x, {x}, n, false, none);
    CHECK(self.recall == 1.0);

    // bounds
    const RougeScore xy = rouge_n(x, {y}, n, false, none);
    CHECK(xy.recall >= 0.0);
    CHECK(xy.recall <= 1.0);
    CHECK(xy.precision >= 0.0);
    CHECK(xy.precision <= 1.0);
    CHECK(xy.f1 >= 0.0);
    CHECK(xy.f1 <= 1.0);

    // adding a reference never decreases the aggregated recall
    const RougeScore xyz = rouge_n(x, {y, z}, n, false, none);
    CHECK(xyz.recall >= xy.recall);

    // duplicating a reference changes nothing
    const RougeScore dup = rouge_n(x, {y, y, z}, n, false, none);
    CHECK(dup.recall == xyz.recall);
    CHECK(dup.f1 == xyz.f1);
  }
}

TEST_CASE("label_sentences basics") {
  DocumentCluster cluster;
  cluster.cluster_id = "c";
  Document doc;
  doc.doc_id = "d";
  Sentence planted;
  planted.tokens = tokenize("the storm battered quebec on monday .");
  planted.doc_id = "d";
  planted.index_in_doc = 1;
  Sentence unrelated;
  unrelated.tokens = tokenize("children played in the park .");
  unrelated.doc_id = "d";
  unrelated.index_in_doc = 2;
  doc.sentences = {planted, unrelated};
  cluster.documents = {doc};
  cluster.references = {{planted.tokens}};

  const auto labels = label_sentences(cluster, StopwordSet::default_english());
  REQUIRE(labels.size() == 1);
  REQUIRE(labels[0].size() == 2);
  CHECK(labels[0][0] == doctest::Approx(1.0));
  CHECK(labels[0][1] == doctest::Approx(0.0));
}

TEST_CASE("label_sentences agrees with a brute-force bigram oracle") {
  Rng rng(47);
  const StopwordSet none = StopwordSet::empty();
  for (int trial = 0; trial < 100; ++trial) {
    const TokenSeq cand = random_tokens(rng, 2 + static_cast<int>(rng.below(12)), 4);
    const TokenSeq ref = random_tokens(rng, 2 + static_cast<int>(rng.below(12)), 4);
    const double expected = brute_bigram_recall(cand, ref);
    const double got = rouge_n(cand, {ref}, 2, false, none).recall;
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sentence with fewer than two content tokens gets label zero") {
  DocumentCluster cluster;
  Document doc;
  doc.doc_id = "d";
  Sentence tiny;
  tiny.tokens = {"quebec"};  // one content token: no bigrams
  tiny.doc_id = "d";
  tiny.index_in_doc = 1;
  doc.sentences = {tiny};
  cluster.documents = {doc};
  cluster.references = {{tokenize("quebec storm hit hard")}};
  const auto labels = label_sentences(cluster, StopwordSet::default_english());
  CHECK(labels[0][0] == 0.0);
}

TEST_CASE("label_sentences requires references") {
  DocumentCluster cluster;
  Document doc;
  doc.doc_id = "d";
  cluster.documents = {doc};
  CHECK_THROWS_AS(label_sentences(cluster, kNone), Error);
}
