#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hnet/text.hpp"

namespace hnet {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  int n = 1;
};

using TokenSeq = std::vector<std::string>;

// Contiguous n-token windows with multiplicity; empty when fewer than n
// tokens. Keys are the window tokens joined with a 0x1e separator.
std::unordered_map<std::string, int> ngram_counts(std::span<const std::string> tokens, int n);

// Clipped n-gram overlap against each reference; the result is the single
// best reference by (recall, f1), which keeps f1 the harmonic mean of the
// returned pair and makes the aggregate monotone in added references.
RougeScore rouge_n(const TokenSeq& candidate, const std::vector<TokenSeq>& references,
                   int n, bool drop_stopwords, const StopwordSet& stopwords);

// Each reference summary flattened to one token sequence.
std::vector<TokenSeq> flatten_references(const DocumentCluster& cluster);

// Regression target per sentence: stopword-filtered ROUGE-2 recall against
// the cluster references. Indexed [document][sentence].
std::vector<std::vector<double>> label_sentences(const DocumentCluster& cluster,
                                                 const StopwordSet& stopwords);

}  // namespace hnet
