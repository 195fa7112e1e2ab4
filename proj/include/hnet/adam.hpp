#pragma once

#include <cstdint>

#include "hnet/tensor.hpp"

namespace hnet {

struct AdamConfig {
  double lr = 0.009;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Per-parameter first/second moments plus the shared step counter.
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(AdamConfig config) : config_(config) {}

  const AdamConfig& config() const { return config_; }
  std::uint64_t step_count() const { return step_; }

  const std::map<std::string, Tensor>& first_moment() const { return first_; }
  const std::map<std::string, Tensor>& second_moment() const { return second_; }

  friend void adam_step(ParamStore& params, const GradMap& grads, AdamState& state);

 private:
  AdamConfig config_;
  std::map<std::string, Tensor> first_;
  std::map<std::string, Tensor> second_;
  std::uint64_t step_ = 0;
};

// One bias-corrected Adam update. grads' keys must be a subset of params';
// moments are created lazily (zeros) the first time a parameter appears.
void adam_step(ParamStore& params, const GradMap& grads, AdamState& state);

}  // namespace hnet
