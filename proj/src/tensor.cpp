#include "hnet/tensor.hpp"

#include <cstring>
#include <sstream>

namespace hnet {

Tensor Tensor::zeros_vector(Index n) { return Tensor(Matrix::Zero(n, 1), 1); }

Tensor Tensor::zeros_matrix(Index rows, Index cols) {
  return Tensor(Matrix::Zero(rows, cols), 2);
}

Tensor Tensor::from_vector(Vector v) {
  Matrix m = v;
  return Tensor(std::move(m), 1);
}

Tensor Tensor::from_matrix(Matrix m) { return Tensor(std::move(m), 2); }

std::vector<std::uint32_t> Tensor::dims() const {
  if (rank_ == 1) return {static_cast<std::uint32_t>(rows())};
  return {static_cast<std::uint32_t>(rows()), static_cast<std::uint32_t>(cols())};
}

bool Tensor::same_shape(const Tensor& other) const {
  return rank_ == other.rank_ && rows() == other.rows() && cols() == other.cols();
}

bool Tensor::bit_equal(const Tensor& other) const {
  if (!same_shape(other)) return false;
  if (size() == 0) return true;
  return std::memcmp(values_.data(), other.values_.data(),
                     sizeof(double) * static_cast<std::size_t>(size())) == 0;
}

Tensor Tensor::zeros_like() const {
  return rank_ == 1 ? zeros_vector(rows()) : zeros_matrix(rows(), cols());
}

Tensor& ParamStore::add(const std::string& name, Tensor t) {
  auto [it, inserted] = params_.emplace(name, std::move(t));
  if (!inserted) throw Error("duplicate parameter name: " + name);
  return it->second;
}

bool ParamStore::has(const std::string& name) const {
  return params_.count(name) != 0;
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter: " + name);
  return it->second;
}

void ParamStore::init_from(const ParamStore& source, bool strict,
                           const std::string& lenient_prefix) {
  std::vector<std::string> missing;
  for (auto& [name, tensor] : params_) {
    auto it = source.entries().find(name);
    if (it == source.entries().end()) {
      const bool lenient =
          !lenient_prefix.empty() && name.rfind(lenient_prefix, 0) == 0;
      if (strict && !lenient) missing.push_back(name);
      continue;
    }
    if (!tensor.same_shape(it->second)) {
      std::ostringstream os;
      os << "checkpoint shape mismatch for " << name << ": expected "
         << tensor.rows() << "x" << tensor.cols() << ", found "
         << it->second.rows() << "x" << it->second.cols();
      throw CheckpointError(CheckpointError::Code::shape_mismatch, os.str());
    }
    tensor = it->second;
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "checkpoint is missing " << missing.size() << " parameter(s):";
    for (const auto& name : missing) os << " " << name;
    throw CheckpointError(CheckpointError::Code::missing_params, os.str());
  }
}

bool ParamStore::bit_equal(const ParamStore& other) const {
  if (rng_seed_ != other.rng_seed_) return false;
  if (params_.size() != other.params_.size()) return false;
  auto it = other.params_.begin();
  for (const auto& [name, tensor] : params_) {
    if (name != it->first || !tensor.bit_equal(it->second)) return false;
    ++it;
  }
  return true;
}

Tensor uniform_tensor_vector(Index n, Rng& rng, double bound) {
  Tensor t = Tensor::zeros_vector(n);
  for (Index i = 0; i < n; ++i) t.mat()(i, 0) = rng.uniform(-bound, bound);
  return t;
}

Tensor uniform_tensor_matrix(Index rows, Index cols, Rng& rng, double bound) {
  Tensor t = Tensor::zeros_matrix(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) t.mat()(r, c) = rng.uniform(-bound, bound);
  return t;
}

Tensor dropout_mask(Index rows, Index cols, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0)
    throw Error("dropout rate must be in [0, 1), got " + std::to_string(rate));
  Tensor t = cols == 1 ? Tensor::zeros_vector(rows) : Tensor::zeros_matrix(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      t.mat()(r, c) = rng.unit() < rate ? 0.0 : keep_scale;
  return t;
}

}  // namespace hnet
