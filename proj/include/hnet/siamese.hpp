#pragma once

#include "hnet/csti.hpp"
#include "hnet/train.hpp"

namespace hnet {

// Manhattan is the trained metric; the others exist as inference-time
// ablations only.
enum class SimMetric { manhattan, euclidean, cosine };

SimMetric parse_metric(const std::string& name);

// Two weight-tied CSTI branches compared with exp(-L1). Tying is
// structural: both branches bind the same "siam.*" parameters, so there is
// exactly one weight set.
class SiamModel {
 public:
  explicit SiamModel(CstiConfig config);

  const CstiModel& csti() const { return csti_; }
  const CstiConfig& config() const { return csti_.config(); }

  void init_params(ParamStore& store, Rng& rng) const { csti_.init_params(store, rng); }

  // Root vector of one branch.
  Var encode(Graph& g, std::span<const Var> words) const;

  Vector encode_value(const ParamStore& store, const EmbeddingTable& embeddings,
                      const Sentence& sentence) const;

 private:
  CstiModel csti_;
};

// g = exp(-||a - b||_1) in (0, 1]; exactly 1 iff the roots are equal.
double similarity_from_roots(const Vector& a, const Vector& b,
                             SimMetric metric = SimMetric::manhattan);

double similarity(const SiamModel& model, const ParamStore& store,
                  const EmbeddingTable& embeddings, const Sentence& a, const Sentence& b,
                  SimMetric metric = SimMetric::manhattan);

// True iff some selected root is at least tau-similar to the candidate.
bool is_redundant_roots(const Vector& candidate, std::span<const Vector> selected,
                        double tau, SimMetric metric = SimMetric::manhattan);

bool is_redundant(const SiamModel& model, const ParamStore& store,
                  const EmbeddingTable& embeddings, const Sentence& candidate,
                  std::span<const Sentence> selected, double tau,
                  SimMetric metric = SimMetric::manhattan);

// MSE between g and the pair's relatedness rescaled from [1,5] to [0,1].
// Gradients from both branches accumulate into the shared weights.
TrainTrace train_siamese(ParamStore& store, const SiamModel& model,
                         const EmbeddingTable& embeddings,
                         const std::vector<SentencePair>& pairs, const TrainHyper& hyper);

}  // namespace hnet
