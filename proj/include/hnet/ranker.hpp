#pragma once

#include "hnet/csti.hpp"
#include "hnet/features.hpp"
#include "hnet/rouge.hpp"
#include "hnet/train.hpp"

namespace hnet {

struct RankerConfig {
  CstiConfig csti;
  int feature_dim = 50;  // d_e, dense transform of the five raw features

  void validate() const;
  static RankerConfig tiny();
};

struct ScoreOptions {
  const Tensor* mask_phi_f = nullptr;  // dropout mask on the CSTI root
  const Tensor* mask_phi_e = nullptr;  // dropout mask on the feature embedding
  bool ablate_features = false;        // zero phi_e (the HNet- variant)
  bool train_embeddings = false;
};

// Saliency regressor: y = logistic(W . [phi_f, phi_e]) where phi_f is the
// CSTI root and phi_e = ReLU(dense(features)).
class RankerModel {
 public:
  explicit RankerModel(RankerConfig config);

  const RankerConfig& config() const { return config_; }
  const CstiModel& csti() const { return csti_; }

  void init_params(ParamStore& store, Rng& rng) const;

  Var score(Graph& g, std::span<const Var> words, const DocFeatures& features,
            const ScoreOptions& options = {}) const;

  double score_value(const ParamStore& store, const EmbeddingTable& embeddings,
                     const Sentence& sentence, const DocFeatures& features,
                     bool ablate_features = false) const;

 private:
  RankerConfig config_;
  CstiModel csti_;
};

struct TrainRecord {
  Sentence sentence;
  DocFeatures features;
  double target = 0.0;  // ROUGE-2 recall label in [0, 1]
};

// Labels every sentence of every cluster (stopword-filtered ROUGE-2 recall
// against the cluster references) and pairs it with its features.
std::vector<TrainRecord> make_training_records(std::span<const DocumentCluster> clusters,
                                               const CorpusStats& stats,
                                               const StopwordSet& stopwords);

// Minimizes mean squared error between predicted scores and targets with
// Adam; dropout is applied to phi_f and phi_e while training. The store
// must already hold the model parameters (fresh init or checkpoint).
TrainTrace train_ranker(ParamStore& store, const RankerModel& model,
                        const EmbeddingTable& embeddings,
                        const std::vector<TrainRecord>& records,
                        const TrainHyper& hyper);

struct RankedSentence {
  Sentence sentence;
  double score = 0.0;
  int doc_pos = 0;       // position of the document within the cluster
  int index_in_doc = 0;  // tie break: (score desc, doc_pos asc, index asc)
};

std::vector<RankedSentence> rank_cluster(const DocumentCluster& cluster,
                                         const RankerModel& model, const ParamStore& store,
                                         const EmbeddingTable& embeddings,
                                         const CorpusStats& stats,
                                         const StopwordSet& stopwords,
                                         bool ablate_features = false);

}  // namespace hnet
