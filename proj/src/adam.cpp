#include "hnet/adam.hpp"

#include <cmath>
#include <sstream>

namespace hnet {

void adam_step(ParamStore& params, const GradMap& grads, AdamState& state) {
  const AdamConfig& cfg = state.config_;
  state.step_ += 1;
  const double t = static_cast<double>(state.step_);
  const double corr1 = 1.0 - std::pow(cfg.beta1, t);
  const double corr2 = 1.0 - std::pow(cfg.beta2, t);

  for (const auto& [name, grad] : grads) {
    if (!params.has(name)) throw Error("adam_step: gradient for unknown parameter " + name);
    Tensor& param = params.at(name);
    if (!param.same_shape(grad)) {
      std::ostringstream os;
      os << "adam_step: shape mismatch for " << name << ": param " << param.rows()
         << "x" << param.cols() << ", grad " << grad.rows() << "x" << grad.cols();
      throw Error(os.str());
    }
    auto m_it = state.first_.find(name);
    if (m_it == state.first_.end())
      m_it = state.first_.emplace(name, param.zeros_like()).first;
    auto v_it = state.second_.find(name);
    if (v_it == state.second_.end())
      v_it = state.second_.emplace(name, param.zeros_like()).first;

    Matrix& m = m_it->second.mat();
    Matrix& v = v_it->second.mat();
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad.mat();
    v = cfg.beta2 * v.array().matrix() +
        (1.0 - cfg.beta2) * grad.mat().cwiseProduct(grad.mat());

    param.mat().array() -=
        cfg.lr * (m.array() / corr1) /
        ((v.array() / corr2).sqrt() + cfg.epsilon);
    if (!param.all_finite())
      throw NonFiniteError("adam_step: non-finite parameter after update: " + name);
  }
}

}  // namespace hnet
