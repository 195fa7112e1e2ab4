#include "hnet/summarize.hpp"

#include <cctype>

namespace hnet {

int word_count(const Sentence& sentence) {
  int words = 0;
  for (const std::string& token : sentence.tokens) {
    for (unsigned char c : token) {
      if (std::isalnum(c) != 0 || c >= 0x80) {
        ++words;
        break;
      }
    }
  }
  return words;
}

Summary select_summary(std::span<const RankedSentence> ranked, const SiamModel& sim_model,
                       const ParamStore& sim_store, const EmbeddingTable& embeddings,
                       double tau, SummaryBudget budget, SimMetric metric) {
  Summary summary;
  if (budget.max_words <= 0) return summary;
  if (tau <= 0.0 || tau >= 1.0)
    throw Error("redundancy threshold tau must be in (0, 1), got " + std::to_string(tau));

  std::vector<Vector> selected_roots;
  for (const RankedSentence& candidate : ranked) {
    const int words = word_count(candidate.sentence);
    if (summary.total_words + words > budget.max_words) continue;
    const Vector root =
        sim_model.encode_value(sim_store, embeddings, candidate.sentence);
    if (is_redundant_roots(root, selected_roots, tau, metric)) continue;
    summary.items.push_back(candidate);
    summary.total_words += words;
    selected_roots.push_back(root);
  }
  return summary;
}

}  // namespace hnet
