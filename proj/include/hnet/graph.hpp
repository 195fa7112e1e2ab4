#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hnet/tensor.hpp"

namespace hnet {

class Graph;

// Handle to one tape node. Cheap to copy; valid as long as its Graph lives.
class Var {
 public:
  Var() = default;
  Graph& graph() const { return *graph_; }
  int id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}
  Graph* graph_ = nullptr;
  int id_ = -1;
};

enum class OpKind : std::uint8_t {
  input,
  param,
  add,
  sub,
  cwise_mul,
  scale,
  matmul,
  tanh,
  logistic,
  relu,
  exp,
  concat_rows,
  concat_cols,
  slice_rows,
  row_max,
  sum_all,
  mean_all,
  l1_distance,
};

const char* op_name(OpKind op);

// Reverse-mode tape. Nodes are appended in execution order (so creation
// order is a topological order) and the backward pass walks them exactly
// once in reverse. Every forward value is checked finite when produced.
class Graph {
 public:
  explicit Graph(const ParamStore& params);

  // Leaves.
  Var input(Matrix value);
  Var input(const Tensor& t) { return input(t.mat()); }
  Var scalar_input(double v);
  Var zeros(Index rows, Index cols);
  Var param(const std::string& name);  // one node per name, cached

  const Matrix& value(Var v) const;
  double scalar(Var v) const;  // value of a 1x1 node
  std::size_t node_count() const { return nodes_.size(); }

  // Smallest distance of any forward value to a non-differentiable point
  // (relu input at 0, a row_max tie, l1_distance coordinates at equality).
  // Finite-difference oracles are only valid with enough margin here.
  double kink_margin() const;

  // Gradients of a scalar loss w.r.t. every parameter in the store;
  // parameters the graph never touched come back as zeros.
  GradMap backward(Var loss);

  // Builders used by the free functions below.
  Var make_unary(OpKind op, Var a);
  Var make_binary(OpKind op, Var a, Var b);
  Var make_scale(Var a, double factor);
  Var make_concat(OpKind op, std::span<const Var> parts);
  Var make_slice_rows(Var a, Index start, Index len);

 private:
  struct Node {
    OpKind op;
    std::vector<int> inputs;
    Matrix value;
    double factor = 0.0;          // scale
    Index start = 0, len = 0;     // slice_rows
    std::vector<Index> argmax;    // row_max
    std::string name;             // param
  };

  Var push(Node node);
  void check_finite(const Node& node, int id) const;
  const Node& node(Var v) const;
  [[noreturn]] void shape_error(OpKind op, const Node& a, const Node& b) const;

  const ParamStore* store_;
  std::vector<Node> nodes_;
  std::map<std::string, Var> param_cache_;
};

// Expression-style free functions. operator* is the matrix product;
// element-wise multiplication is cwise_mul, as in Eigen.
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator*(double k, Var a);
Var cwise_mul(Var a, Var b);
Var tanh(Var a);
Var logistic(Var a);
Var relu(Var a);
Var exp(Var a);
Var concat_rows(std::span<const Var> parts);
Var concat_cols(std::span<const Var> parts);
Var slice_rows(Var a, Index start, Index len);
Var row_max(Var a);
Var sum_all(Var a);
Var mean_all(Var a);
Var l1_distance(Var a, Var b);

inline Var mean_pair(Var a, Var b) { return 0.5 * (a + b); }
inline Var square(Var a) { return cwise_mul(a, a); }

using GraphFn = std::function<Var(Graph&)>;

struct ForwardBackwardResult {
  double loss = 0.0;
  GradMap grads;
};

// Runs graph_fn over a fresh tape bound to `params`, then backpropagates
// from the scalar it returns.
ForwardBackwardResult forward_backward(const ParamStore& params, const GraphFn& graph_fn);

// Central-difference gradient oracle: (f(p+eps e) - f(p-eps e)) / (2 eps)
// per scalar coordinate. Independent of the tape.
GradMap finite_diff_grad(const std::function<double(const ParamStore&)>& loss_fn,
                         const ParamStore& params, double eps);

// |a-f| relative to max(|a|, |f|, floor); used by all gradient checks.
double gradient_rel_error(const Tensor& analytic, const Tensor& numeric,
                          double floor = 1e-4);
double max_gradient_rel_error(const GradMap& analytic, const GradMap& numeric,
                              double floor = 1e-4);

}  // namespace hnet
