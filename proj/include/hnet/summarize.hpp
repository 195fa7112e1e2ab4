#pragma once

#include "hnet/ranker.hpp"
#include "hnet/siamese.hpp"

namespace hnet {

struct SummaryBudget {
  int max_words = 100;
};

struct Summary {
  std::vector<RankedSentence> items;  // in selection (score) order
  int total_words = 0;
};

// Tokens that carry at least one alphanumeric character; standalone
// punctuation does not count against the budget.
int word_count(const Sentence& sentence);

// Walks the ranking in order; a candidate is skipped when it would exceed
// the word budget (scanning continues) or when some already selected
// sentence is at least tau-similar to it.
Summary select_summary(std::span<const RankedSentence> ranked, const SiamModel& sim_model,
                       const ParamStore& sim_store, const EmbeddingTable& embeddings,
                       double tau, SummaryBudget budget,
                       SimMetric metric = SimMetric::manhattan);

}  // namespace hnet
