#include "hnet/rouge.hpp"

#include <algorithm>

namespace hnet {

namespace {

constexpr char kSep = '\x1e';

TokenSeq drop_stops(const TokenSeq& tokens, const StopwordSet& stopwords) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens)
    if (!stopwords.contains(t)) out.push_back(t);
  return out;
}

struct Overlap {
  long matched = 0;
  long ref_total = 0;
  long cand_total = 0;
};

Overlap clipped_overlap(const std::unordered_map<std::string, int>& cand,
                        const std::unordered_map<std::string, int>& ref) {
  Overlap o;
  for (const auto& [gram, count] : ref) {
    o.ref_total += count;
    auto it = cand.find(gram);
    if (it != cand.end()) o.matched += std::min(count, it->second);
  }
  for (const auto& [gram, count] : cand) o.cand_total += count;
  return o;
}

}  // namespace

std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n) {
  if (n < 1) throw Error("ngram_counts: n must be >= 1");
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back(kSep);
      key += tokens[i + static_cast<std::size_t>(j)];
    }
    ++counts[key];
  }
  return counts;
}

RougeScore rouge_n(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
                   int n, bool drop_stopwords, const StopwordSet& stopwords) {
  if (references.empty()) throw Error("rouge_n: at least one reference required");
  const TokenSeq cand_tokens =
      drop_stopwords ? drop_stops(candidate, stopwords) : candidate;
  const auto cand_counts = ngram_counts(cand_tokens, n);

  RougeScore best;
  best.n = n;
  bool first = true;
  for (const TokenSeq& reference : references) {
    const TokenSeq ref_tokens =
        drop_stopwords ? drop_stops(reference, stopwords) : reference;
    const auto ref_counts = ngram_counts(ref_tokens, n);
    const Overlap o = clipped_overlap(cand_counts, ref_counts);
    RougeScore score;
    score.n = n;
    score.recall = o.ref_total == 0 ? 0.0
                                    : static_cast<double>(o.matched) /
                                          static_cast<double>(o.ref_total);
    score.precision = o.cand_total == 0 ? 0.0
                                        : static_cast<double>(o.matched) /
                                              static_cast<double>(o.cand_total);
    score.f1 = score.recall + score.precision == 0.0
                   ? 0.0
                   : 2.0 * score.recall * score.precision /
                         (score.recall + score.precision);
    if (first || score.recall > best.recall ||
        (score.recall == best.recall && score.f1 > best.f1)) {
      best = score;
      first = false;
    }
  }
  return best;
}

std::vector<TokenSeq> flatten_references(const DocumentCluster& cluster) {
  std::vector<TokenSeq> flat;
  flat.reserve(cluster.references.size());
  for (const ReferenceSummary& ref : cluster.references) {
    TokenSeq tokens;
    for (const auto& sentence : ref)
      tokens.insert(tokens.end(), sentence.begin(), sentence.end());
    flat.push_back(std::move(tokens));
  }
  return flat;
}

std::vector<std::vector<double>> label_sentences(const DocumentCluster& cluster,
                                                 const StopwordSet& stopwords) {
  if (cluster.references.empty())
    throw Error("label_sentences: cluster '" + cluster.cluster_id +
                "' has no references");
  const auto refs = flatten_references(cluster);
  std::vector<std::vector<double>> labels;
  labels.reserve(cluster.documents.size());
  for (const Document& doc : cluster.documents) {
    std::vector<double> doc_labels;
    doc_labels.reserve(doc.sentences.size());
    for (const Sentence& sentence : doc.sentences)
      doc_labels.push_back(
          rouge_n(sentence.tokens, refs, 2, /*drop_stopwords=*/true, stopwords).recall);
    labels.push_back(std::move(doc_labels));
  }
  return labels;
}

}  // namespace hnet
