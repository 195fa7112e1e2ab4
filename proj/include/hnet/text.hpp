#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hnet/errors.hpp"
#include "hnet/types.hpp"

namespace hnet {

struct Sentence {
  std::vector<std::string> tokens;
  std::string doc_id;
  int index_in_doc = 0;  // 1-based
  std::string raw_text;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;
};

// One reference summary: its sentences, each already tokenized.
using ReferenceSummary = std::vector<std::vector<std::string>>;

struct DocumentCluster {
  std::string cluster_id;
  std::vector<Document> documents;
  std::vector<ReferenceSummary> references;

  std::size_t sentence_count() const;
};

struct SentencePair {
  Sentence sent_a;
  Sentence sent_b;
  double relatedness = 1.0;  // in [1, 5]
};

// Lowercases ASCII, splits punctuation into standalone tokens, keeps
// digits; bytes >= 0x80 are treated as word characters so UTF-8 sequences
// stay intact. Idempotent on its own space-joined output.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

class StopwordSet {
 public:
  static const StopwordSet& default_english();  // the standard 127-word list
  static StopwordSet from_file(const std::filesystem::path& path);
  static StopwordSet empty();

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }
  void insert(const std::string& token, Vector v);
  bool has(const std::string& token) const { return table_.count(token) != 0; }

  // Total: out-of-vocabulary tokens map to the zero vector.
  const Vector& lookup(const std::string& token) const;

 private:
  int dim_;
  Vector zero_;
  std::unordered_map<std::string, Vector> table_;
};

// Text format: one "word v1 ... vdim" per line. Blank lines are skipped;
// a line with the wrong component count raises ParseError with its number.
EmbeddingTable load_embeddings(const std::filesystem::path& path, int dim);

// Layout: <dir>/docs/<doc_id>.txt and <dir>/refs/<ref_id>.txt, one sentence
// per line, blank lines skipped. Documents and references are ordered by
// filename. The cluster id is the directory name.
DocumentCluster load_cluster(const std::filesystem::path& dir);

// Every subdirectory of `dir` is a cluster; sorted by name.
std::vector<DocumentCluster> load_cluster_set(const std::filesystem::path& dir);

struct PretrainRecord {
  std::string id;
  std::vector<std::string> sentences;
  std::vector<std::vector<std::string>> references;  // each a list of sentence strings
};

std::vector<PretrainRecord> load_pretrain_jsonl(const std::filesystem::path& path);

// A pretrain record viewed as a one-document cluster.
DocumentCluster cluster_from_record(const PretrainRecord& record);

// TSV: sent_a \t sent_b \t relatedness, relatedness in [1, 5].
std::vector<SentencePair> load_pairs_tsv(const std::filesystem::path& path);

}  // namespace hnet
