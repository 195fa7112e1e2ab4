#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hnet/errors.hpp"
#include "hnet/rng.hpp"
#include "hnet/types.hpp"

namespace hnet {

// Dense real tensor of rank 1 (column vector) or rank 2. The rank only
// matters for checkpoint dims; all math happens on the underlying matrix.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros_vector(Index n);
  static Tensor zeros_matrix(Index rows, Index cols);
  static Tensor from_vector(Vector v);
  static Tensor from_matrix(Matrix m);

  int rank() const { return rank_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  Index size() const { return values_.size(); }
  std::vector<std::uint32_t> dims() const;

  Matrix& mat() { return values_; }
  const Matrix& mat() const { return values_; }

  bool all_finite() const { return values_.allFinite(); }
  bool same_shape(const Tensor& other) const;
  bool bit_equal(const Tensor& other) const;

  // Zero tensor with this tensor's rank and shape.
  Tensor zeros_like() const;

 private:
  Tensor(Matrix m, int rank) : values_(std::move(m)), rank_(rank) {}
  Matrix values_;
  int rank_ = 2;
};

using GradMap = std::map<std::string, Tensor>;

// Named parameter map; the unit of training, checkpointing and transfer.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor t);
  bool has(const std::string& name) const;
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  const std::map<std::string, Tensor>& entries() const { return params_; }
  std::map<std::string, Tensor>& entries() { return params_; }
  std::size_t size() const { return params_.size(); }

  std::uint64_t rng_seed() const { return rng_seed_; }
  void set_rng_seed(std::uint64_t seed) { rng_seed_ = seed; }

  // Copies same-named entries from `source`. With strict=true every
  // parameter of this store must be present there; missing names raise
  // CheckpointError{missing_params} listing them. Shape conflicts always
  // raise CheckpointError{shape_mismatch}. Names matching `lenient_prefix`
  // (when non-empty) are exempt from the strict requirement.
  void init_from(const ParamStore& source, bool strict,
                 const std::string& lenient_prefix = "");

  bool bit_equal(const ParamStore& other) const;

 private:
  std::map<std::string, Tensor> params_;
  std::uint64_t rng_seed_ = 0;
};

// Uniform values in [-bound, bound].
Tensor uniform_tensor_vector(Index n, Rng& rng, double bound);
Tensor uniform_tensor_matrix(Index rows, Index cols, Rng& rng, double bound);

// Inverted-dropout mask: entries are 0 with probability `rate`, else
// 1/(1-rate), so masked activations keep their expectation. rate must be
// in [0, 1).
Tensor dropout_mask(Index rows, Index cols, double rate, Rng& rng);

}  // namespace hnet
