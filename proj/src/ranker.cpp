#include "hnet/ranker.hpp"

#include <algorithm>
#include <sstream>

namespace hnet {

void RankerConfig::validate() const {
  csti.validate();
  if (feature_dim < 1) throw Error("ranker: feature_dim must be positive");
}

RankerConfig RankerConfig::tiny() {
  RankerConfig cfg;
  cfg.csti = CstiConfig::tiny();
  cfg.feature_dim = 6;
  return cfg;
}

RankerModel::RankerModel(RankerConfig config)
    : config_(std::move(config)), csti_(config_.csti, "csti.") {
  config_.validate();
}

void RankerModel::init_params(ParamStore& store, Rng& rng) const {
  constexpr double kBound = 0.08;
  csti_.init_params(store, rng);
  store.add("ranker.dense.weight",
            uniform_tensor_matrix(config_.feature_dim, DocFeatures::kCount, rng, kBound));
  store.add("ranker.dense.bias", Tensor::zeros_vector(config_.feature_dim));
  store.add("ranker.regress.weight",
            uniform_tensor_matrix(1, config_.csti.hidden_dim + config_.feature_dim,
                                  rng, kBound));
}

Var RankerModel::score(Graph& g, std::span<const Var> words,
                       const DocFeatures& features, const ScoreOptions& options) const {
  const TreeRoot tree = csti_.encode(g, words);
  Var phi_f = tree.root.h;
  if (options.mask_phi_f != nullptr) phi_f = cwise_mul(phi_f, g.input(*options.mask_phi_f));

  Var phi_e = options.ablate_features
                  ? g.zeros(config_.feature_dim, 1)
                  : relu(g.param("ranker.dense.weight") * g.input(Matrix(features.to_vector())) +
                         g.param("ranker.dense.bias"));
  if (options.mask_phi_e != nullptr) phi_e = cwise_mul(phi_e, g.input(*options.mask_phi_e));

  const std::array<Var, 2> parts = {phi_f, phi_e};
  const Var unified = concat_rows(parts);
  return logistic(g.param("ranker.regress.weight") * unified);
}

double RankerModel::score_value(const ParamStore& store, const EmbeddingTable& embeddings,
                                const Sentence& sentence, const DocFeatures& features,
                                bool ablate_features) const {
  Graph g(store);
  const auto words = embed_tokens(g, embeddings, sentence.tokens);
  ScoreOptions options;
  options.ablate_features = ablate_features;
  return g.scalar(score(g, words, features, options));
}

std::vector<TrainRecord> make_training_records(std::span<const DocumentCluster> clusters,
                                               const CorpusStats& stats,
                                               const StopwordSet& stopwords) {
  std::vector<TrainRecord> records;
  for (const DocumentCluster& cluster : clusters) {
    const auto labels = label_sentences(cluster, stopwords);
    const auto counts = ClusterCounts::build(cluster);
    for (std::size_t d = 0; d < cluster.documents.size(); ++d) {
      const Document& doc = cluster.documents[d];
      for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        TrainRecord record;
        record.sentence = doc.sentences[s];
        record.features = extract_doc_features(doc.sentences[s], counts, stats, stopwords);
        record.target = labels[d][s];
        records.push_back(std::move(record));
      }
    }
  }
  return records;
}

TrainTrace train_ranker(ParamStore& store, const RankerModel& model,
                        const EmbeddingTable& embeddings,
                        const std::vector<TrainRecord>& records,
                        const TrainHyper& hyper) {
  if (records.empty()) throw Error("train_ranker: empty dataset");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrainRecord& r = records[i];
    if (r.target < 0.0 || r.target > 1.0) {
      std::ostringstream os;
      os << "train_ranker: record " << i << " (" << r.sentence.doc_id << ":"
         << r.sentence.index_in_doc << ") has target " << r.target
         << " outside [0, 1]";
      throw Error(os.str());
    }
    if (r.sentence.tokens.empty()) {
      std::ostringstream os;
      os << "train_ranker: record " << i << " has an empty sentence";
      throw Error(os.str());
    }
  }

  const int dh = model.config().csti.hidden_dim;
  const int de = model.config().feature_dim;
  return run_adam_training(
      store, records.size(), hyper,
      [&](Graph& g, std::span<const std::size_t> batch, Rng& rng) {
        std::vector<Var> losses;
        losses.reserve(batch.size());
        for (std::size_t idx : batch) {
          const TrainRecord& record = records[idx];
          const auto words =
              embed_tokens(g, embeddings, record.sentence.tokens, hyper.train_embeddings);
          ScoreOptions options;
          options.train_embeddings = hyper.train_embeddings;
          Tensor mask_f, mask_e;
          if (hyper.dropout > 0.0) {
            mask_f = dropout_mask(dh, 1, hyper.dropout, rng);
            mask_e = dropout_mask(de, 1, hyper.dropout, rng);
            options.mask_phi_f = &mask_f;
            options.mask_phi_e = &mask_e;
          }
          const Var y = model.score(g, words, record.features, options);
          losses.push_back(square(y - g.scalar_input(record.target)));
        }
        return mean_all(concat_rows(losses));
      });
}

std::vector<RankedSentence> rank_cluster(const DocumentCluster& cluster,
                                         const RankerModel& model, const ParamStore& store,
                                         const EmbeddingTable& embeddings,
                                         const CorpusStats& stats,
                                         const StopwordSet& stopwords,
                                         bool ablate_features) {
  std::vector<RankedSentence> ranked;
  if (cluster.documents.empty()) return ranked;
  const auto counts = ClusterCounts::build(cluster);
  for (std::size_t d = 0; d < cluster.documents.size(); ++d) {
    const Document& doc = cluster.documents[d];
    for (const Sentence& sentence : doc.sentences) {
      const DocFeatures features = extract_doc_features(sentence, counts, stats, stopwords);
      RankedSentence item;
      item.sentence = sentence;
      item.score = model.score_value(store, embeddings, sentence, features, ablate_features);
      item.doc_pos = static_cast<int>(d);
      item.index_in_doc = sentence.index_in_doc;
      ranked.push_back(std::move(item));
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedSentence& a, const RankedSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.doc_pos != b.doc_pos) return a.doc_pos < b.doc_pos;
    return a.index_in_doc < b.index_in_doc;
  });
  return ranked;
}

}  // namespace hnet
