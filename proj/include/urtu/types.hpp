#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace urtu {

template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = Vec<double>;
using Matrix = Mat<double>;
using Index = Eigen::Index;

/// Evenly spaced grid from a to b inclusive; count >= 2.
inline Vector linspace(double a, double b, Index count) {
  return Vector::LinSpaced(count, a, b);
}

}  // namespace urtu
