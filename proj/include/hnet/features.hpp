#pragma once

#include <filesystem>
#include <span>
#include <unordered_map>

#include "hnet/text.hpp"

namespace hnet {

// The extractor's five document-dependent features.
struct DocFeatures {
  double position = 0.0;           // 1 / index_in_doc
  double avg_cluster_freq = 0.0;   // mean token frequency within the cluster
  double avg_tf = 0.0;             // mean token frequency within the own document
  double avg_idf_over_len = 0.0;   // mean token idf divided by sentence length
  double max_idf = 0.0;            // max token idf

  static constexpr int kCount = 5;
  Vector to_vector() const;
};

// Document frequencies over a training corpus; persists alongside a
// checkpoint so scoring at inference needs no training data.
class CorpusStats {
 public:
  static CorpusStats build(std::span<const DocumentCluster> clusters);

  int document_count() const { return document_count_; }
  int df(const std::string& token) const;

  // ln(1 + D / (df + 1)); the +1 keeps unseen words finite.
  double idf(const std::string& token) const;

  void save(const std::filesystem::path& path) const;
  static CorpusStats load(const std::filesystem::path& path);

 private:
  int document_count_ = 0;
  std::unordered_map<std::string, int> df_;
};

// Token counts for the cluster being scored.
struct ClusterCounts {
  std::unordered_map<std::string, long> cluster_tf;
  long cluster_total = 0;
  std::unordered_map<std::string, std::unordered_map<std::string, long>> doc_tf;
  std::unordered_map<std::string, long> doc_len;

  static ClusterCounts build(const DocumentCluster& cluster);
};

// Stopwords are excluded from features (2)-(5); if nothing remains the
// full token list is used instead. Sentence length for feature (4) is the
// unfiltered token count. An empty sentence yields all zeros.
DocFeatures extract_doc_features(const Sentence& sentence, const ClusterCounts& counts,
                                 const CorpusStats& stats, const StopwordSet& stopwords);

}  // namespace hnet
