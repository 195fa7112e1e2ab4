#include "hnet/synth.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hnet/errors.hpp"
#include "hnet/rng.hpp"
#include "hnet/text.hpp"

namespace hnet {

namespace {

struct Topic {
  const char* noun;
  const char* verb;
};

constexpr Topic kTopics[] = {
    {"storm", "battered"},   {"earthquake", "struck"}, {"wildfire", "swept"},
    {"flood", "submerged"},  {"blizzard", "paralyzed"}, {"outbreak", "gripped"},
};

const char* const kEntities[] = {
    "quebec", "ontario", "denver",  "oslo",    "madrid", "cairo",  "lagos",
    "lima",   "perth",   "dublin",  "vienna",  "osaka",  "quito",  "nairobi",
    "seattle", "geneva", "mumbai",  "krakow",  "bogota", "athens",
};

const char* const kDays[] = {"monday", "tuesday", "wednesday", "thursday",
                             "friday", "saturday", "sunday"};

const char* const kDayparts[] = {"morning", "afternoon", "evening"};

const char* const kFillers[] = {
    "it was a quiet {daypart} and people went about their business .",
    "residents shared stories over coffee in the market square .",
    "life continued much as it always had for everyone nearby .",
    "some shops opened late and others closed early that {daypart} .",
    "a gentle breeze drifted across the rooftops all {daypart} .",
    "neighbors greeted one another and talked about small things .",
    "the streets looked ordinary and nothing seemed out of place .",
    "children played in the park while elders watched from benches .",
};

// Slot values of one planted fact.
struct Fact {
  Topic topic;
  std::string entity;
  std::string number;
  std::string day;

  std::string canonical() const {
    return number + " people died when the " + topic.noun + " " + topic.verb +
           " " + entity + " on " + day + " .";
  }
  std::string strong_paraphrase() const {
    return "officials said the " + std::string(topic.noun) + " " + topic.verb +
           " " + entity + " and " + number + " people died .";
  }
  std::string weak_paraphrase() const {
    return "the " + std::string(topic.noun) + " " + topic.verb +
           " the area near " + entity + " last " + day + " .";
  }
};

class Generator {
 public:
  explicit Generator(const SynthSpec& spec) : spec_(spec), rng_(spec.seed) {}

  SynthPaths run() {
    namespace fs = std::filesystem;
    SynthPaths paths;
    paths.clusters_dir = spec_.out_dir / "clusters";
    paths.pretrain_jsonl = spec_.out_dir / "pretrain.jsonl";
    paths.pairs_tsv = spec_.out_dir / "pairs.tsv";
    paths.embeddings_txt = spec_.out_dir / "embeddings.txt";
    fs::create_directories(paths.clusters_dir);

    write_clusters(paths.clusters_dir);
    write_pretrain(paths.pretrain_jsonl);
    write_pairs(paths.pairs_tsv);
    write_embeddings(paths.embeddings_txt);
    return paths;
  }

 private:
  Fact draw_fact() {
    Fact fact;
    fact.topic = kTopics[rng_.below(std::size(kTopics))];
    fact.entity = kEntities[rng_.below(std::size(kEntities))];
    fact.number = std::to_string(10 + rng_.below(890));
    fact.day = kDays[rng_.below(std::size(kDays))];
    return fact;
  }

  std::string draw_filler() {
    std::string text = kFillers[rng_.below(std::size(kFillers))];
    const std::string slot = "{daypart}";
    const auto at = text.find(slot);
    if (at != std::string::npos)
      text.replace(at, slot.size(), kDayparts[rng_.below(std::size(kDayparts))]);
    return text;
  }

  void note_vocab(const std::string& sentence) {
    for (const std::string& token : tokenize(sentence)) vocab_.insert(token);
  }

  void emit(std::vector<std::string>& sentences, std::string text) {
    note_vocab(text);
    sentences.push_back(std::move(text));
  }

  // One synthetic document over `facts`: a canonical fact leads, its
  // siblings appear as paraphrases, fillers pad the rest.
  std::vector<std::string> make_document(const std::vector<Fact>& facts, int rotation,
                                         int n_sentences) {
    const int f = static_cast<int>(facts.size());
    std::vector<std::string> sentences;
    emit(sentences, facts[static_cast<std::size_t>(rotation % f)].canonical());
    if (n_sentences >= 2)
      emit(sentences, facts[static_cast<std::size_t>((rotation + 1) % f)].strong_paraphrase());
    if (n_sentences >= 3)
      emit(sentences, facts[static_cast<std::size_t>((rotation + 2) % f)].weak_paraphrase());
    while (static_cast<int>(sentences.size()) < n_sentences)
      emit(sentences, draw_filler());
    return sentences;
  }

  void write_clusters(const std::filesystem::path& dir) {
    for (int c = 0; c < spec_.n_clusters; ++c) {
      std::ostringstream id;
      id << "cluster_" << std::setw(3) << std::setfill('0') << c;
      const auto cluster_dir = dir / id.str();
      std::filesystem::create_directories(cluster_dir / "docs");
      std::filesystem::create_directories(cluster_dir / "refs");

      std::vector<Fact> facts;
      for (int i = 0; i < 3; ++i) facts.push_back(draw_fact());

      for (int d = 0; d < spec_.docs_per_cluster; ++d) {
        std::ostringstream doc_id;
        doc_id << "doc_" << std::setw(2) << std::setfill('0') << d;
        std::ofstream out(cluster_dir / "docs" / (doc_id.str() + ".txt"));
        for (const std::string& s : make_document(facts, d, spec_.sents_per_doc))
          out << s << "\n";
      }
      for (std::size_t r = 0; r < facts.size(); ++r) {
        std::ofstream out(cluster_dir / "refs" /
                          ("ref_" + std::to_string(r) + ".txt"));
        std::string text = facts[r].canonical();
        note_vocab(text);
        out << text << "\n";
      }
    }
  }

  void write_pretrain(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    for (int r = 0; r < spec_.pretrain_records; ++r) {
      std::vector<Fact> facts = {draw_fact(), draw_fact()};
      const auto sentences = make_document(facts, r, spec_.sents_per_record);
      nlohmann::json j;
      std::ostringstream id;
      id << "record_" << std::setw(3) << std::setfill('0') << r;
      j["id"] = id.str();
      j["sentences"] = sentences;
      nlohmann::json refs = nlohmann::json::array();
      for (const Fact& fact : facts)
        refs.push_back(std::vector<std::string>{fact.canonical()});
      j["references"] = std::move(refs);
      out << j.dump() << "\n";
    }
  }

  void write_pairs(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    for (int p = 0; p < spec_.n_pairs; ++p) {
      std::string a, b;
      int relatedness;
      if (p % 2 == 0) {
        const Fact fact = draw_fact();
        a = fact.canonical();
        b = fact.strong_paraphrase();
        relatedness = 5;
      } else {
        Fact fa = draw_fact();
        Fact fb = draw_fact();
        while (std::string(fb.topic.noun) == fa.topic.noun) fb = draw_fact();
        a = fa.canonical();
        b = fb.canonical();
        relatedness = 1;
      }
      note_vocab(a);
      note_vocab(b);
      out << a << "\t" << b << "\t" << relatedness << "\n";
    }
  }

  void write_embeddings(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << std::fixed << std::setprecision(6);
    Rng emb_rng(spec_.seed ^ 0x9e3779b97f4a7c15ULL);
    for (const std::string& token : vocab_) {
      out << token;
      for (int i = 0; i < spec_.embed_dim; ++i) out << " " << emb_rng.uniform(-0.3, 0.3);
      out << "\n";
    }
  }

  SynthSpec spec_;
  Rng rng_;
  std::set<std::string> vocab_;  // sorted, so embedding rows are stable
};

}  // namespace

SynthPaths generate_synthetic_corpus(const SynthSpec& spec) {
  if (spec.n_clusters < 1 || spec.docs_per_cluster < 1 || spec.sents_per_doc < 1 ||
      spec.pretrain_records < 1 || spec.sents_per_record < 1 || spec.n_pairs < 1)
    throw Error("synthetic corpus: all counts must be >= 1");
  if (spec.embed_dim < 1) throw Error("synthetic corpus: embed_dim must be >= 1");
  if (spec.out_dir.empty()) throw Error("synthetic corpus: out_dir required");
  Generator generator(spec);
  return generator.run();
}

}  // namespace hnet
