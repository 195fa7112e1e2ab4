#include "hnet/siamese.hpp"

#include <cmath>
#include <sstream>

namespace hnet {

SimMetric parse_metric(const std::string& name) {
  if (name == "manhattan") return SimMetric::manhattan;
  if (name == "euclidean") return SimMetric::euclidean;
  if (name == "cosine") return SimMetric::cosine;
  throw Error("unknown similarity metric: " + name);
}

SiamModel::SiamModel(CstiConfig config) : csti_(std::move(config), "siam.") {}

Var SiamModel::encode(Graph& g, std::span<const Var> words) const {
  return csti_.encode(g, words).root.h;
}

Vector SiamModel::encode_value(const ParamStore& store, const EmbeddingTable& embeddings,
                               const Sentence& sentence) const {
  Graph g(store);
  const auto words = embed_tokens(g, embeddings, sentence.tokens);
  return g.value(encode(g, words)).col(0);
}

double similarity_from_roots(const Vector& a, const Vector& b, SimMetric metric) {
  if (a.size() != b.size()) throw Error("similarity: dimension mismatch");
  switch (metric) {
    case SimMetric::manhattan:
      return std::exp(-(a - b).cwiseAbs().sum());
    case SimMetric::euclidean:
      return std::exp(-(a - b).norm());
    case SimMetric::cosine: {
      const double denom = a.norm() * b.norm();
      if (denom == 0.0) return a.isZero() && b.isZero() ? 1.0 : 0.5;
      return 0.5 * (1.0 + a.dot(b) / denom);
    }
  }
  throw Error("unreachable metric");
}

double similarity(const SiamModel& model, const ParamStore& store,
                  const EmbeddingTable& embeddings, const Sentence& a, const Sentence& b,
                  SimMetric metric) {
  return similarity_from_roots(model.encode_value(store, embeddings, a),
                               model.encode_value(store, embeddings, b), metric);
}

bool is_redundant_roots(const Vector& candidate, std::span<const Vector> selected,
                        double tau, SimMetric metric) {
  if (tau <= 0.0 || tau >= 1.0)
    throw Error("redundancy threshold tau must be in (0, 1), got " + std::to_string(tau));
  for (const Vector& root : selected)
    if (similarity_from_roots(candidate, root, metric) >= tau) return true;
  return false;
}

bool is_redundant(const SiamModel& model, const ParamStore& store,
                  const EmbeddingTable& embeddings, const Sentence& candidate,
                  std::span<const Sentence> selected, double tau, SimMetric metric) {
  std::vector<Vector> roots;
  roots.reserve(selected.size());
  for (const Sentence& s : selected)
    roots.push_back(model.encode_value(store, embeddings, s));
  return is_redundant_roots(model.encode_value(store, embeddings, candidate), roots,
                            tau, metric);
}

TrainTrace train_siamese(ParamStore& store, const SiamModel& model,
                         const EmbeddingTable& embeddings,
                         const std::vector<SentencePair>& pairs, const TrainHyper& hyper) {
  if (pairs.empty()) throw Error("train_siamese: empty pair set");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].relatedness < 1.0 || pairs[i].relatedness > 5.0) {
      std::ostringstream os;
      os << "train_siamese: pair " << i << " has relatedness " << pairs[i].relatedness
         << " outside [1, 5]";
      throw Error(os.str());
    }
    if (pairs[i].sent_a.tokens.empty() || pairs[i].sent_b.tokens.empty()) {
      std::ostringstream os;
      os << "train_siamese: pair " << i << " has an empty sentence";
      throw Error(os.str());
    }
  }

  return run_adam_training(
      store, pairs.size(), hyper,
      [&](Graph& g, std::span<const std::size_t> batch, Rng&) {
        std::vector<Var> losses;
        losses.reserve(batch.size());
        for (std::size_t idx : batch) {
          const SentencePair& pair = pairs[idx];
          const auto words_a = embed_tokens(g, embeddings, pair.sent_a.tokens);
          const auto words_b = embed_tokens(g, embeddings, pair.sent_b.tokens);
          const Var root_a = model.encode(g, words_a);
          const Var root_b = model.encode(g, words_b);
          const Var sim = exp(-1.0 * l1_distance(root_a, root_b));
          const double target = (pair.relatedness - 1.0) / 4.0;
          losses.push_back(square(sim - g.scalar_input(target)));
        }
        return mean_all(concat_rows(losses));
      });
}

}  // namespace hnet
