#pragma once

#include <Eigen/Dense>

namespace hnet {

// Row-major storage throughout so checkpoint payloads can stream straight
// from .data().
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

}  // namespace hnet
