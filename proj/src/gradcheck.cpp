#include "hnet/gradcheck.hpp"

#include "hnet/ranker.hpp"
#include "hnet/siamese.hpp"

namespace hnet {

namespace {

constexpr double kEps = 1e-5;

CstiConfig check_csti_config() {
  CstiConfig cfg;
  cfg.widths = {1, 2};
  cfg.embed_dim = 4;
  cfg.conv_dim = 3;
  cfg.hidden_dim = 5;
  return cfg;
}

EmbeddingTable random_embeddings(int dim, std::span<const std::string> vocab, Rng& rng) {
  EmbeddingTable table(dim);
  for (const std::string& token : vocab) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.uniform(-1.0, 1.0);
    table.insert(token, std::move(v));
  }
  return table;
}

GradCheckReport compare(const GradMap& analytic, const GradMap& numeric) {
  GradCheckReport report;
  auto it = numeric.begin();
  for (const auto& [name, grad] : analytic) {
    GradCheckEntry entry;
    entry.param = name;
    entry.rel_err = gradient_rel_error(grad, it->second);
    report.worst = std::max(report.worst, entry.rel_err);
    report.entries.push_back(std::move(entry));
    ++it;
  }
  return report;
}

}  // namespace

GradCheckReport gradcheck_ranker(std::uint64_t seed) {
  RankerConfig config;
  config.csti = check_csti_config();
  config.feature_dim = 4;
  const RankerModel model(config);

  Rng rng(seed);
  ParamStore store;
  model.init_params(store, rng);

  const std::vector<std::string> vocab = {"alpha", "beta", "gamma", "delta", "omega"};
  const EmbeddingTable table = random_embeddings(config.csti.embed_dim, vocab, rng);

  struct Example {
    std::vector<std::string> tokens;
    DocFeatures features;
    double target;
  };
  std::vector<Example> examples(2);
  examples[0].tokens = {"alpha", "beta", "gamma"};
  examples[0].target = 0.8;
  examples[1].tokens = {"delta", "omega", "alpha", "beta"};
  examples[1].target = 0.3;
  for (Example& ex : examples) {
    ex.features.position = rng.uniform(0.1, 1.0);
    ex.features.avg_cluster_freq = rng.uniform(0.0, 0.5);
    ex.features.avg_tf = rng.uniform(0.0, 0.5);
    ex.features.avg_idf_over_len = rng.uniform(0.0, 1.0);
    ex.features.max_idf = rng.uniform(0.5, 2.0);
  }

  const auto build_loss = [&](Graph& g) {
    std::vector<Var> losses;
    for (const Example& ex : examples) {
      const auto words = embed_tokens(g, table, ex.tokens);
      const Var y = model.score(g, words, ex.features);
      losses.push_back(square(y - g.scalar_input(ex.target)));
    }
    return mean_all(concat_rows(losses));
  };

  const auto fb = forward_backward(store, build_loss);
  const auto numeric = finite_diff_grad(
      [&](const ParamStore& p) {
        Graph g(p);
        return g.scalar(build_loss(g));
      },
      store, kEps);
  return compare(fb.grads, numeric);
}

GradCheckReport gradcheck_siamese(std::uint64_t seed) {
  const SiamModel model(check_csti_config());

  Rng rng(seed);
  ParamStore store;
  model.init_params(store, rng);

  const std::vector<std::string> vocab = {"one", "two", "three", "four", "five", "six"};
  const EmbeddingTable table = random_embeddings(model.config().embed_dim, vocab, rng);

  const std::vector<std::string> tokens_a = {"one", "two", "three"};
  const std::vector<std::string> tokens_b = {"four", "five", "six", "one"};
  const double target = 0.75;

  const auto build_loss = [&](Graph& g) {
    const auto words_a = embed_tokens(g, table, tokens_a);
    const auto words_b = embed_tokens(g, table, tokens_b);
    const Var sim =
        exp(-1.0 * l1_distance(model.encode(g, words_a), model.encode(g, words_b)));
    return square(sim - g.scalar_input(target));
  };

  const auto fb = forward_backward(store, build_loss);
  const auto numeric = finite_diff_grad(
      [&](const ParamStore& p) {
        Graph g(p);
        return g.scalar(build_loss(g));
      },
      store, kEps);
  return compare(fb.grads, numeric);
}

}  // namespace hnet
