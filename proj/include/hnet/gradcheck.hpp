#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hnet {

struct GradCheckEntry {
  std::string param;
  double rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double worst = 0.0;
  bool pass(double tolerance = 1e-4) const { return worst < tolerance; }
};

// End-to-end checks at tiny dims (embed 4, conv 3, hidden 5, widths 1-2):
// analytic gradients of an MSE scoring loss (ranker) and of a pair loss
// (siamese) against central finite differences with eps 1e-5, parameter by
// parameter.
GradCheckReport gradcheck_ranker(std::uint64_t seed);
GradCheckReport gradcheck_siamese(std::uint64_t seed);

}  // namespace hnet
