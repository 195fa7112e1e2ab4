#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hnet/adam.hpp"
#include "hnet/graph.hpp"
#include "hnet/rng.hpp"

namespace hnet {

struct TrainHyper {
  double lr = 0.009;
  double dropout = 0.2;
  int batch_size = 35;
  int epochs = 100;
  std::uint64_t seed = 0;
  bool train_embeddings = false;
};

struct TrainTrace {
  std::vector<double> epoch_loss;  // mean squared error per epoch

  double final_loss() const {
    return epoch_loss.empty() ? 0.0 : epoch_loss.back();
  }
};

// Shared epoch/batch/Adam skeleton. batch_loss(graph, indices, rng) builds
// the mean loss over one shuffled batch; rng drives dropout masks. With a
// fixed seed the whole trajectory is reproducible bit for bit.
template <typename BatchLossFn>
TrainTrace run_adam_training(ParamStore& store, std::size_t n_records,
                             const TrainHyper& hyper, BatchLossFn&& batch_loss) {
  if (n_records == 0) throw Error("training requires at least one record");
  if (hyper.batch_size < 1) throw Error("batch_size must be >= 1");
  if (hyper.epochs < 0) throw Error("epochs must be >= 0");

  AdamState adam(AdamConfig{hyper.lr, 0.9, 0.999, 1e-8});
  Rng rng(hyper.seed);
  std::vector<std::size_t> order(n_records);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainTrace trace;
  trace.epoch_loss.reserve(static_cast<std::size_t>(hyper.epochs));
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t len =
          std::min(order.size() - at, static_cast<std::size_t>(hyper.batch_size));
      const std::span<const std::size_t> batch(order.data() + at, len);
      const auto result = forward_backward(
          store, [&](Graph& g) { return batch_loss(g, batch, rng); });
      adam_step(store, result.grads, adam);
      total += result.loss * static_cast<double>(len);
    }
    trace.epoch_loss.push_back(total / static_cast<double>(n_records));
  }
  return trace;
}

}  // namespace hnet
