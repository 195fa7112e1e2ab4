#include "hnet/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace hnet {

Vector DocFeatures::to_vector() const {
  Vector v(kCount);
  v << position, avg_cluster_freq, avg_tf, avg_idf_over_len, max_idf;
  return v;
}

CorpusStats CorpusStats::build(std::span<const DocumentCluster> clusters) {
  CorpusStats stats;
  for (const DocumentCluster& cluster : clusters) {
    for (const Document& doc : cluster.documents) {
      ++stats.document_count_;
      std::unordered_set<std::string> seen;
      for (const Sentence& sentence : doc.sentences)
        for (const std::string& token : sentence.tokens) seen.insert(token);
      for (const std::string& token : seen) ++stats.df_[token];
    }
  }
  return stats;
}

int CorpusStats::df(const std::string& token) const {
  auto it = df_.find(token);
  return it == df_.end() ? 0 : it->second;
}

double CorpusStats::idf(const std::string& token) const {
  return std::log(1.0 + static_cast<double>(document_count_) /
                            static_cast<double>(df(token) + 1));
}

void CorpusStats::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["doc_count"] = document_count_;
  nlohmann::json df = nlohmann::json::object();
  for (const auto& [token, count] : df_) df[token] = count;
  j["df"] = std::move(df);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write corpus stats: " + path.string());
  out << j.dump() << "\n";
}

CorpusStats CorpusStats::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus stats: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    CorpusStats stats;
    stats.document_count_ = j.at("doc_count").get<int>();
    for (const auto& [token, count] : j.at("df").items())
      stats.df_[token] = count.get<int>();
    return stats;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed corpus stats " + path.string() + ": " + e.what());
  }
}

ClusterCounts ClusterCounts::build(const DocumentCluster& cluster) {
  ClusterCounts counts;
  for (const Document& doc : cluster.documents) {
    auto& tf = counts.doc_tf[doc.doc_id];
    long& len = counts.doc_len[doc.doc_id];
    for (const Sentence& sentence : doc.sentences) {
      for (const std::string& token : sentence.tokens) {
        ++tf[token];
        ++len;
        ++counts.cluster_tf[token];
        ++counts.cluster_total;
      }
    }
  }
  return counts;
}

DocFeatures extract_doc_features(const Sentence& sentence, const ClusterCounts& counts,
                                 const CorpusStats& stats, const StopwordSet& stopwords) {
  DocFeatures f;
  if (sentence.tokens.empty()) return f;
  f.position = 1.0 / static_cast<double>(std::max(1, sentence.index_in_doc));

  std::vector<const std::string*> content;
  content.reserve(sentence.tokens.size());
  for (const std::string& token : sentence.tokens)
    if (!stopwords.contains(token)) content.push_back(&token);
  if (content.empty())
    for (const std::string& token : sentence.tokens) content.push_back(&token);

  const auto doc_tf_it = counts.doc_tf.find(sentence.doc_id);
  const auto doc_len_it = counts.doc_len.find(sentence.doc_id);
  const double doc_len =
      doc_len_it == counts.doc_len.end() ? 0.0 : static_cast<double>(doc_len_it->second);

  double sum_cluster_freq = 0.0;
  double sum_tf = 0.0;
  double sum_idf = 0.0;
  for (const std::string* token : content) {
    if (counts.cluster_total > 0) {
      auto it = counts.cluster_tf.find(*token);
      const double count = it == counts.cluster_tf.end() ? 0.0 : static_cast<double>(it->second);
      sum_cluster_freq += count / static_cast<double>(counts.cluster_total);
    }
    if (doc_tf_it != counts.doc_tf.end() && doc_len > 0.0) {
      auto it = doc_tf_it->second.find(*token);
      const double count = it == doc_tf_it->second.end() ? 0.0 : static_cast<double>(it->second);
      sum_tf += count / doc_len;
    }
    const double idf = stats.idf(*token);
    sum_idf += idf;
    f.max_idf = std::max(f.max_idf, idf);
  }
  const double n_content = static_cast<double>(content.size());
  f.avg_cluster_freq = sum_cluster_freq / n_content;
  f.avg_tf = sum_tf / n_content;
  f.avg_idf_over_len =
      (sum_idf / n_content) / static_cast<double>(sentence.tokens.size());
  return f;
}

}  // namespace hnet
