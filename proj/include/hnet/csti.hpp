#pragma once

#include <span>
#include <string>
#include <vector>

#include "hnet/graph.hpp"
#include "hnet/text.hpp"

namespace hnet {

struct CstiConfig {
  std::vector<int> widths = {1, 2, 3, 4, 5};  // convolution window sizes
  int embed_dim = 250;                        // d
  int conv_dim = 125;                         // m, features per width
  int hidden_dim = 150;                       // d_h, tree node state size
  bool composition_bias = true;               // off = paper-literal gates

  void validate() const;
  static CstiConfig tiny();
};

// (h, c) pair carried by every tree node, as tape handles.
struct NodeVar {
  Var h;
  Var c;
};

// Evaluated node state.
struct NodeState {
  Vector h;
  Vector c;
};

struct TreeRoot {
  NodeVar root;
  int padded_leaves = 0;
  int pad_count = 0;
  int compositions = 0;
};

// The Convolutional Sentence Tree Indexer: multi-width convolutions with
// max-over-time pooling feed a full binary tree whose nodes compose child
// states with a bidirectional LSTM-style cell; the root h is the sentence
// vector. All builders run on a Graph so gradients flow to every weight.
class CstiModel {
 public:
  CstiModel(CstiConfig config, std::string prefix);

  const CstiConfig& config() const { return config_; }
  const std::string& prefix() const { return prefix_; }

  // Creates this model's parameters: uniform [-0.08, 0.08], biases zero
  // except forget-gate biases at 1.0.
  void init_params(ParamStore& store, Rng& rng) const;
  std::vector<std::string> param_names() const;

  // Feature map for one width: m x (N-c+1), f_i = tanh(theta . window + b).
  // Sentences shorter than the width are right-padded with zero embeddings
  // so there is always at least one window.
  Var conv_feature_map(Graph& g, int width, std::span<const Var> words) const;

  // Pooled features, one m-vector per width (max over time).
  std::vector<Var> conv_encode(Graph& g, std::span<const Var> words) const;

  // h = ReLU(W phi + b), c = 0.
  NodeVar leaf_transform(Graph& g, Var phi) const;

  // Bidirectional gated composition of two child states; the reverse
  // direction runs the same equations with its own weights and the
  // children swapped, and the two directions are averaged element-wise.
  NodeVar compose_node(Graph& g, const NodeVar& left, const NodeVar& right) const;

  // Pads the pooled features with zero vectors to the next power of two,
  // leaf-transforms every slot and composes adjacent pairs level by level.
  TreeRoot build_tree(Graph& g, std::span<const Var> phis) const;

  // conv_encode + build_tree.
  TreeRoot encode(Graph& g, std::span<const Var> words) const;

  // Convenience: run a sentence through a throwaway graph, return values.
  NodeState encode_values(const ParamStore& store, const EmbeddingTable& embeddings,
                          const Sentence& sentence) const;

 private:
  NodeVar compose_direction(Graph& g, const std::string& dir, const NodeVar& left,
                            const NodeVar& right) const;
  std::string name(const std::string& suffix) const { return prefix_ + suffix; }

  CstiConfig config_;
  std::string prefix_;
};

// One tape leaf per token. With trainable=false the embedding vectors are
// constants; otherwise they bind to "emb.<token>" parameters in the store.
std::vector<Var> embed_tokens(Graph& g, const EmbeddingTable& embeddings,
                              std::span<const std::string> tokens, bool trainable = false);

inline int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace hnet
