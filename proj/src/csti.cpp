#include "hnet/csti.hpp"

#include <algorithm>

namespace hnet {

namespace {

const char* const kGateBiases[] = {"bias.input", "bias.forget_left",
                                   "bias.forget_right", "bias.cand", "bias.output"};

}  // namespace

void CstiConfig::validate() const {
  if (widths.empty()) throw Error("csti: widths must be non-empty");
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 1) throw Error("csti: widths must be >= 1");
    if (i > 0 && widths[i] <= widths[i - 1])
      throw Error("csti: widths must be strictly increasing");
  }
  if (embed_dim < 1 || conv_dim < 1 || hidden_dim < 1)
    throw Error("csti: dimensions must be positive");
}

CstiConfig CstiConfig::tiny() {
  CstiConfig cfg;
  cfg.widths = {1, 2};
  cfg.embed_dim = 10;
  cfg.conv_dim = 6;
  cfg.hidden_dim = 8;
  return cfg;
}

CstiModel::CstiModel(CstiConfig config, std::string prefix)
    : config_(std::move(config)), prefix_(std::move(prefix)) {
  config_.validate();
}

void CstiModel::init_params(ParamStore& store, Rng& rng) const {
  const int d = config_.embed_dim;
  const int m = config_.conv_dim;
  const int dh = config_.hidden_dim;
  constexpr double kBound = 0.08;

  for (int width : config_.widths) {
    const std::string base = name("conv.w" + std::to_string(width) + ".");
    store.add(base + "weight", uniform_tensor_matrix(m, width * d, rng, kBound));
    store.add(base + "bias", Tensor::zeros_vector(m));
  }
  store.add(name("leaf.weight"), uniform_tensor_matrix(dh, m, rng, kBound));
  store.add(name("leaf.bias"), Tensor::zeros_vector(dh));

  for (const char* dir : {"fwd", "rev"}) {
    const std::string base = name(std::string(dir) + ".");
    for (int i = 1; i <= 17; ++i)
      store.add(base + "W" + std::to_string(i),
                uniform_tensor_matrix(dh, dh, rng, kBound));
    if (config_.composition_bias) {
      for (const char* bias : kGateBiases) {
        Tensor t = Tensor::zeros_vector(dh);
        const std::string bias_name(bias);
        if (bias_name == "bias.forget_left" || bias_name == "bias.forget_right")
          t.mat().setConstant(1.0);
        store.add(base + bias_name, std::move(t));
      }
    }
  }
}

std::vector<std::string> CstiModel::param_names() const {
  std::vector<std::string> names;
  for (int width : config_.widths) {
    const std::string base = name("conv.w" + std::to_string(width) + ".");
    names.push_back(base + "weight");
    names.push_back(base + "bias");
  }
  names.push_back(name("leaf.weight"));
  names.push_back(name("leaf.bias"));
  for (const char* dir : {"fwd", "rev"}) {
    const std::string base = name(std::string(dir) + ".");
    for (int i = 1; i <= 17; ++i) names.push_back(base + "W" + std::to_string(i));
    if (config_.composition_bias)
      for (const char* bias : kGateBiases) names.push_back(base + bias);
  }
  return names;
}

Var CstiModel::conv_feature_map(Graph& g, int width, std::span<const Var> words) const {
  if (words.empty()) throw Error("conv_feature_map: empty sentence");
  const std::string base = name("conv.w" + std::to_string(width) + ".");
  const Var weight = g.param(base + "weight");
  const Var bias = g.param(base + "bias");

  std::vector<Var> padded(words.begin(), words.end());
  while (padded.size() < static_cast<std::size_t>(width))
    padded.push_back(g.zeros(config_.embed_dim, 1));

  const std::size_t n_windows = padded.size() - static_cast<std::size_t>(width) + 1;
  std::vector<Var> features;
  features.reserve(n_windows);
  for (std::size_t i = 0; i < n_windows; ++i) {
    Var window = width == 1
                     ? padded[i]
                     : concat_rows(std::span<const Var>(padded.data() + i,
                                                        static_cast<std::size_t>(width)));
    features.push_back(tanh(weight * window + bias));
  }
  return concat_cols(features);
}

std::vector<Var> CstiModel::conv_encode(Graph& g, std::span<const Var> words) const {
  if (words.empty()) throw Error("conv_encode: empty sentence");
  std::vector<Var> pooled;
  pooled.reserve(config_.widths.size());
  for (int width : config_.widths)
    pooled.push_back(row_max(conv_feature_map(g, width, words)));
  return pooled;
}

NodeVar CstiModel::leaf_transform(Graph& g, Var phi) const {
  const Var weight = g.param(name("leaf.weight"));
  const Var bias = g.param(name("leaf.bias"));
  NodeVar node;
  node.h = relu(weight * phi + bias);
  node.c = g.zeros(config_.hidden_dim, 1);
  return node;
}

NodeVar CstiModel::compose_direction(Graph& g, const std::string& dir,
                                     const NodeVar& left, const NodeVar& right) const {
  const std::string base = name(dir + ".");
  auto W = [&](int i) { return g.param(base + "W" + std::to_string(i)); };

  auto gate_pre = [&](int w_hl, int w_hr, int w_cl, int w_cr, const char* bias) {
    Var pre = W(w_hl) * left.h + W(w_hr) * right.h + W(w_cl) * left.c + W(w_cr) * right.c;
    if (config_.composition_bias) pre = pre + g.param(base + bias);
    return pre;
  };

  const Var gate_in = logistic(gate_pre(1, 2, 3, 4, "bias.input"));
  const Var forget_left = logistic(gate_pre(5, 6, 7, 8, "bias.forget_left"));
  const Var forget_right = logistic(gate_pre(9, 10, 11, 12, "bias.forget_right"));

  Var cand_pre = W(13) * left.h + W(14) * right.h;
  if (config_.composition_bias) cand_pre = cand_pre + g.param(base + "bias.cand");
  const Var cand = tanh(cand_pre);

  NodeVar parent;
  parent.c = cwise_mul(forget_left, left.c) + cwise_mul(forget_right, right.c) +
             cwise_mul(gate_in, cand);

  Var out_pre = W(15) * left.h + W(16) * right.h + W(17) * parent.c;
  if (config_.composition_bias) out_pre = out_pre + g.param(base + "bias.output");
  const Var gate_out = logistic(out_pre);
  parent.h = cwise_mul(gate_out, tanh(parent.c));
  return parent;
}

NodeVar CstiModel::compose_node(Graph& g, const NodeVar& left, const NodeVar& right) const {
  const NodeVar forward = compose_direction(g, "fwd", left, right);
  const NodeVar reverse = compose_direction(g, "rev", right, left);
  NodeVar merged;
  merged.h = mean_pair(forward.h, reverse.h);
  merged.c = mean_pair(forward.c, reverse.c);
  return merged;
}

TreeRoot CstiModel::build_tree(Graph& g, std::span<const Var> phis) const {
  if (phis.empty()) throw Error("build_tree: no pooled features");
  TreeRoot result;
  result.padded_leaves = next_power_of_two(static_cast<int>(phis.size()));
  result.pad_count = result.padded_leaves - static_cast<int>(phis.size());

  std::vector<NodeVar> level;
  level.reserve(static_cast<std::size_t>(result.padded_leaves));
  for (Var phi : phis) level.push_back(leaf_transform(g, phi));
  for (int i = 0; i < result.pad_count; ++i)
    level.push_back(leaf_transform(g, g.zeros(config_.conv_dim, 1)));

  while (level.size() > 1) {
    std::vector<NodeVar> next;
    next.reserve(level.size() / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(compose_node(g, level[i], level[i + 1]));
      ++result.compositions;
    }
    level = std::move(next);
  }
  result.root = level.front();
  return result;
}

TreeRoot CstiModel::encode(Graph& g, std::span<const Var> words) const {
  const std::vector<Var> pooled = conv_encode(g, words);
  return build_tree(g, pooled);
}

NodeState CstiModel::encode_values(const ParamStore& store,
                                   const EmbeddingTable& embeddings,
                                   const Sentence& sentence) const {
  Graph g(store);
  const auto words = embed_tokens(g, embeddings, sentence.tokens);
  const TreeRoot tree = encode(g, words);
  NodeState state;
  state.h = g.value(tree.root.h).col(0);
  state.c = g.value(tree.root.c).col(0);
  return state;
}

std::vector<Var> embed_tokens(Graph& g, const EmbeddingTable& embeddings,
                              std::span<const std::string> tokens, bool trainable) {
  if (tokens.empty()) throw Error("embed_tokens: sentence has no tokens");
  std::vector<Var> words;
  words.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (trainable) {
      words.push_back(g.param("emb." + token));
    } else {
      words.push_back(g.input(Matrix(embeddings.lookup(token))));
    }
  }
  return words;
}

}  // namespace hnet
