#include "hnet/graph.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hnet {

const char* op_name(OpKind op) {
  switch (op) {
    case OpKind::input: return "input";
    case OpKind::param: return "param";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::cwise_mul: return "cwise_mul";
    case OpKind::scale: return "scale";
    case OpKind::matmul: return "matmul";
    case OpKind::tanh: return "tanh";
    case OpKind::logistic: return "logistic";
    case OpKind::relu: return "relu";
    case OpKind::exp: return "exp";
    case OpKind::concat_rows: return "concat_rows";
    case OpKind::concat_cols: return "concat_cols";
    case OpKind::slice_rows: return "slice_rows";
    case OpKind::row_max: return "row_max";
    case OpKind::sum_all: return "sum_all";
    case OpKind::mean_all: return "mean_all";
    case OpKind::l1_distance: return "l1_distance";
  }
  return "?";
}

Graph::Graph(const ParamStore& params) : store_(&params) {}

Var Graph::push(Node node) {
  const int id = static_cast<int>(nodes_.size());
  check_finite(node, id);
  nodes_.push_back(std::move(node));
  return Var(this, id);
}

void Graph::check_finite(const Node& node, int id) const {
  if (node.value.allFinite()) return;
  std::ostringstream os;
  os << "non-finite value at node #" << id << " (" << op_name(node.op);
  if (!node.name.empty()) os << " " << node.name;
  os << ")";
  throw NonFiniteError(os.str());
}

const Graph::Node& Graph::node(Var v) const {
  if (!v.valid() || &v.graph() != this)
    throw Error("Var does not belong to this graph");
  return nodes_[static_cast<std::size_t>(v.id())];
}

void Graph::shape_error(OpKind op, const Node& a, const Node& b) const {
  std::ostringstream os;
  os << op_name(op) << ": incompatible shapes " << a.value.rows() << "x"
     << a.value.cols() << " and " << b.value.rows() << "x" << b.value.cols();
  throw Error(os.str());
}

Var Graph::input(Matrix value) {
  Node n;
  n.op = OpKind::input;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::scalar_input(double v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return input(std::move(m));
}

Var Graph::zeros(Index rows, Index cols) { return input(Matrix::Zero(rows, cols)); }

Var Graph::param(const std::string& name) {
  auto it = param_cache_.find(name);
  if (it != param_cache_.end()) return it->second;
  Node n;
  n.op = OpKind::param;
  n.name = name;
  n.value = store_->at(name).mat();
  Var v = push(std::move(n));
  param_cache_.emplace(name, v);
  return v;
}

const Matrix& Graph::value(Var v) const { return node(v).value; }

double Graph::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) throw Error("scalar() on a non-1x1 node");
  return m(0, 0);
}

double Graph::kink_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const Node& n : nodes_) {
    switch (n.op) {
      case OpKind::relu: {
        const Matrix& x = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        margin = std::min(margin, x.cwiseAbs().minCoeff());
        break;
      }
      case OpKind::row_max: {
        const Matrix& x = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        if (x.cols() < 2) break;
        for (Index r = 0; r < x.rows(); ++r) {
          double best = -std::numeric_limits<double>::infinity();
          double second = best;
          for (Index c = 0; c < x.cols(); ++c) {
            const double v = x(r, c);
            if (v > best) {
              second = best;
              best = v;
            } else if (v > second) {
              second = v;
            }
          }
          margin = std::min(margin, best - second);
        }
        break;
      }
      case OpKind::l1_distance: {
        const Matrix& a = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        const Matrix& b = nodes_[static_cast<std::size_t>(n.inputs[1])].value;
        margin = std::min(margin, (a - b).cwiseAbs().minCoeff());
        break;
      }
      default:
        break;
    }
  }
  return margin;
}

Var Graph::make_unary(OpKind op, Var a) {
  const Node& na = node(a);
  Node n;
  n.op = op;
  n.inputs = {a.id()};
  switch (op) {
    case OpKind::tanh:
      n.value = na.value.array().tanh();
      break;
    case OpKind::logistic:
      n.value = (1.0 / (1.0 + (-na.value.array()).exp())).matrix();
      break;
    case OpKind::relu:
      n.value = na.value.cwiseMax(0.0);
      break;
    case OpKind::exp:
      n.value = na.value.array().exp();
      break;
    case OpKind::row_max: {
      n.value.resize(na.value.rows(), 1);
      n.argmax.resize(static_cast<std::size_t>(na.value.rows()));
      for (Index r = 0; r < na.value.rows(); ++r) {
        Index best = 0;
        n.value(r, 0) = na.value.row(r).maxCoeff(&best);
        n.argmax[static_cast<std::size_t>(r)] = best;
      }
      break;
    }
    case OpKind::sum_all: {
      Matrix m(1, 1);
      m(0, 0) = na.value.sum();
      n.value = std::move(m);
      break;
    }
    case OpKind::mean_all: {
      Matrix m(1, 1);
      m(0, 0) = na.value.mean();
      n.value = std::move(m);
      break;
    }
    default:
      throw Error(std::string("not a unary op: ") + op_name(op));
  }
  return push(std::move(n));
}

Var Graph::make_binary(OpKind op, Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Node n;
  n.op = op;
  n.inputs = {a.id(), b.id()};
  switch (op) {
    case OpKind::add:
    case OpKind::sub:
    case OpKind::cwise_mul:
    case OpKind::l1_distance:
      if (na.value.rows() != nb.value.rows() || na.value.cols() != nb.value.cols())
        shape_error(op, na, nb);
      break;
    case OpKind::matmul:
      if (na.value.cols() != nb.value.rows()) shape_error(op, na, nb);
      break;
    default:
      throw Error(std::string("not a binary op: ") + op_name(op));
  }
  switch (op) {
    case OpKind::add:
      n.value = na.value + nb.value;
      break;
    case OpKind::sub:
      n.value = na.value - nb.value;
      break;
    case OpKind::cwise_mul:
      n.value = na.value.cwiseProduct(nb.value);
      break;
    case OpKind::matmul:
      n.value.noalias() = na.value * nb.value;
      break;
    case OpKind::l1_distance: {
      Matrix m(1, 1);
      m(0, 0) = (na.value - nb.value).cwiseAbs().sum();
      n.value = std::move(m);
      break;
    }
    default:
      break;
  }
  return push(std::move(n));
}

Var Graph::make_scale(Var a, double factor) {
  const Node& na = node(a);
  Node n;
  n.op = OpKind::scale;
  n.inputs = {a.id()};
  n.factor = factor;
  n.value = factor * na.value;
  return push(std::move(n));
}

Var Graph::make_concat(OpKind op, std::span<const Var> parts) {
  if (parts.empty()) throw Error("concat of zero parts");
  Node n;
  n.op = op;
  Index total = 0;
  for (Var part : parts) {
    const Node& np = node(part);
    const Node& n0 = node(parts[0]);
    if (op == OpKind::concat_rows && np.value.cols() != n0.value.cols())
      shape_error(op, n0, np);
    if (op == OpKind::concat_cols && np.value.rows() != n0.value.rows())
      shape_error(op, n0, np);
    n.inputs.push_back(part.id());
    total += op == OpKind::concat_rows ? np.value.rows() : np.value.cols();
  }
  const Node& n0 = node(parts[0]);
  if (op == OpKind::concat_rows) {
    n.value.resize(total, n0.value.cols());
    Index at = 0;
    for (Var part : parts) {
      const Matrix& v = node(part).value;
      n.value.middleRows(at, v.rows()) = v;
      at += v.rows();
    }
  } else {
    n.value.resize(n0.value.rows(), total);
    Index at = 0;
    for (Var part : parts) {
      const Matrix& v = node(part).value;
      n.value.middleCols(at, v.cols()) = v;
      at += v.cols();
    }
  }
  return push(std::move(n));
}

Var Graph::make_slice_rows(Var a, Index start, Index len) {
  const Node& na = node(a);
  if (start < 0 || len < 0 || start + len > na.value.rows())
    throw Error("slice_rows out of range");
  Node n;
  n.op = OpKind::slice_rows;
  n.inputs = {a.id()};
  n.start = start;
  n.len = len;
  n.value = na.value.middleRows(start, len);
  return push(std::move(n));
}

GradMap Graph::backward(Var loss) {
  const Node& ln = node(loss);
  if (ln.value.rows() != 1 || ln.value.cols() != 1)
    throw Error("backward() needs a scalar loss node");
  if (!ln.value.allFinite()) throw NonFiniteError("non-finite loss");

  std::vector<Matrix> grads(nodes_.size());
  auto grad_of = [&](int id) -> Matrix& {
    Matrix& g = grads[static_cast<std::size_t>(id)];
    if (g.size() == 0)
      g = Matrix::Zero(nodes_[static_cast<std::size_t>(id)].value.rows(),
                       nodes_[static_cast<std::size_t>(id)].value.cols());
    return g;
  };

  grad_of(loss.id())(0, 0) = 1.0;

  for (int id = static_cast<int>(nodes_.size()) - 1; id >= 0; --id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    Matrix& g = grads[static_cast<std::size_t>(id)];
    if (g.size() == 0) continue;  // node does not influence the loss
    switch (n.op) {
      case OpKind::input:
      case OpKind::param:
        break;
      case OpKind::add:
        grad_of(n.inputs[0]) += g;
        grad_of(n.inputs[1]) += g;
        break;
      case OpKind::sub:
        grad_of(n.inputs[0]) += g;
        grad_of(n.inputs[1]) -= g;
        break;
      case OpKind::cwise_mul:
        grad_of(n.inputs[0]) += g.cwiseProduct(nodes_[static_cast<std::size_t>(n.inputs[1])].value);
        grad_of(n.inputs[1]) += g.cwiseProduct(nodes_[static_cast<std::size_t>(n.inputs[0])].value);
        break;
      case OpKind::scale:
        grad_of(n.inputs[0]) += n.factor * g;
        break;
      case OpKind::matmul: {
        const Matrix& av = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        const Matrix& bv = nodes_[static_cast<std::size_t>(n.inputs[1])].value;
        grad_of(n.inputs[0]).noalias() += g * bv.transpose();
        grad_of(n.inputs[1]).noalias() += av.transpose() * g;
        break;
      }
      case OpKind::tanh:
        grad_of(n.inputs[0]).array() += g.array() * (1.0 - n.value.array().square());
        break;
      case OpKind::logistic:
        grad_of(n.inputs[0]).array() +=
            g.array() * n.value.array() * (1.0 - n.value.array());
        break;
      case OpKind::relu: {
        const Matrix& xv = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        grad_of(n.inputs[0]).array() +=
            g.array() * (xv.array() > 0.0).cast<double>();
        break;
      }
      case OpKind::exp:
        grad_of(n.inputs[0]).array() += g.array() * n.value.array();
        break;
      case OpKind::concat_rows: {
        Index at = 0;
        for (int in : n.inputs) {
          const Index r = nodes_[static_cast<std::size_t>(in)].value.rows();
          grad_of(in) += g.middleRows(at, r);
          at += r;
        }
        break;
      }
      case OpKind::concat_cols: {
        Index at = 0;
        for (int in : n.inputs) {
          const Index c = nodes_[static_cast<std::size_t>(in)].value.cols();
          grad_of(in) += g.middleCols(at, c);
          at += c;
        }
        break;
      }
      case OpKind::slice_rows:
        grad_of(n.inputs[0]).middleRows(n.start, n.len) += g;
        break;
      case OpKind::row_max: {
        Matrix& ga = grad_of(n.inputs[0]);
        for (Index r = 0; r < n.value.rows(); ++r)
          ga(r, n.argmax[static_cast<std::size_t>(r)]) += g(r, 0);
        break;
      }
      case OpKind::sum_all:
        grad_of(n.inputs[0]).array() += g(0, 0);
        break;
      case OpKind::mean_all:
        grad_of(n.inputs[0]).array() +=
            g(0, 0) / static_cast<double>(nodes_[static_cast<std::size_t>(n.inputs[0])].value.size());
        break;
      case OpKind::l1_distance: {
        const Matrix& av = nodes_[static_cast<std::size_t>(n.inputs[0])].value;
        const Matrix& bv = nodes_[static_cast<std::size_t>(n.inputs[1])].value;
        const Matrix sign = (av - bv).array().sign();
        grad_of(n.inputs[0]) += g(0, 0) * sign;
        grad_of(n.inputs[1]) -= g(0, 0) * sign;
        break;
      }
    }
  }

  GradMap result;
  for (const auto& [name, tensor] : store_->entries())
    result.emplace(name, tensor.zeros_like());
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.op != OpKind::param) continue;
    Matrix& g = grads[id];
    if (g.size() == 0) continue;
    if (!g.allFinite()) {
      std::ostringstream os;
      os << "non-finite gradient at node #" << id << " (param " << n.name << ")";
      throw NonFiniteError(os.str());
    }
    result.at(n.name).mat() = g;
  }
  return result;
}

Var operator+(Var a, Var b) { return a.graph().make_binary(OpKind::add, a, b); }
Var operator-(Var a, Var b) { return a.graph().make_binary(OpKind::sub, a, b); }
Var operator*(Var a, Var b) { return a.graph().make_binary(OpKind::matmul, a, b); }
Var operator*(double k, Var a) { return a.graph().make_scale(a, k); }
Var cwise_mul(Var a, Var b) { return a.graph().make_binary(OpKind::cwise_mul, a, b); }
Var tanh(Var a) { return a.graph().make_unary(OpKind::tanh, a); }
Var logistic(Var a) { return a.graph().make_unary(OpKind::logistic, a); }
Var relu(Var a) { return a.graph().make_unary(OpKind::relu, a); }
Var exp(Var a) { return a.graph().make_unary(OpKind::exp, a); }
Var concat_rows(std::span<const Var> parts) {
  return parts[0].graph().make_concat(OpKind::concat_rows, parts);
}
Var concat_cols(std::span<const Var> parts) {
  return parts[0].graph().make_concat(OpKind::concat_cols, parts);
}
Var slice_rows(Var a, Index start, Index len) {
  return a.graph().make_slice_rows(a, start, len);
}
Var row_max(Var a) { return a.graph().make_unary(OpKind::row_max, a); }
Var sum_all(Var a) { return a.graph().make_unary(OpKind::sum_all, a); }
Var mean_all(Var a) { return a.graph().make_unary(OpKind::mean_all, a); }
Var l1_distance(Var a, Var b) {
  return a.graph().make_binary(OpKind::l1_distance, a, b);
}

ForwardBackwardResult forward_backward(const ParamStore& params, const GraphFn& graph_fn) {
  Graph graph(params);
  Var loss = graph_fn(graph);
  ForwardBackwardResult result;
  result.loss = graph.scalar(loss);
  result.grads = graph.backward(loss);
  return result;
}

GradMap finite_diff_grad(const std::function<double(const ParamStore&)>& loss_fn,
                         const ParamStore& params, double eps) {
  if (!(eps > 0.0)) throw Error("finite_diff_grad: eps must be positive");
  ParamStore work = params;
  GradMap grads;
  for (auto& [name, tensor] : work.entries()) {
    Tensor grad = tensor.zeros_like();
    for (Index r = 0; r < tensor.rows(); ++r) {
      for (Index c = 0; c < tensor.cols(); ++c) {
        const double saved = tensor.mat()(r, c);
        tensor.mat()(r, c) = saved + eps;
        const double up = loss_fn(work);
        tensor.mat()(r, c) = saved - eps;
        const double down = loss_fn(work);
        tensor.mat()(r, c) = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
          std::ostringstream os;
          os << "finite_diff_grad: non-finite loss while perturbing " << name
             << "[" << r << "," << c << "]";
          throw NonFiniteError(os.str());
        }
        grad.mat()(r, c) = (up - down) / (2.0 * eps);
      }
    }
    grads.emplace(name, std::move(grad));
  }
  return grads;
}

double gradient_rel_error(const Tensor& analytic, const Tensor& numeric, double floor) {
  if (!analytic.same_shape(numeric))
    throw Error("gradient_rel_error: shape mismatch");
  double worst = 0.0;
  for (Index r = 0; r < analytic.rows(); ++r) {
    for (Index c = 0; c < analytic.cols(); ++c) {
      const double a = analytic.mat()(r, c);
      const double f = numeric.mat()(r, c);
      const double denom = std::max({std::abs(a), std::abs(f), floor});
      worst = std::max(worst, std::abs(a - f) / denom);
    }
  }
  return worst;
}

double max_gradient_rel_error(const GradMap& analytic, const GradMap& numeric, double floor) {
  if (analytic.size() != numeric.size())
    throw Error("max_gradient_rel_error: key mismatch");
  double worst = 0.0;
  auto it = numeric.begin();
  for (const auto& [name, grad] : analytic) {
    if (it->first != name) throw Error("max_gradient_rel_error: key mismatch at " + name);
    worst = std::max(worst, gradient_rel_error(grad, it->second, floor));
    ++it;
  }
  return worst;
}

}  // namespace hnet
