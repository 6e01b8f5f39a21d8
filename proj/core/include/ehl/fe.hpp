#pragma once

#include "ehl/types.hpp"

#include <array>
#include <span>

namespace ehl::fe {

struct GaussPoint1D {
  double xi;
  double weight;
};

/// Gauss-Legendre rule on [-1, 1] with n points, n in [1, 6].
std::span<const GaussPoint1D> gauss_line(int n);

/// 2x2 Gauss rule on the reference square.
struct GaussPoint2D {
  double xi;
  double eta;
  double weight;
};
std::span<const GaussPoint2D> gauss_quad_2x2();

/// Bilinear shape functions; node order (-1,-1), (1,-1), (1,1), (-1,1).
inline std::array<double, 4> quad_shape(double xi, double eta) {
  return {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
          0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
}

/// dN/dxi (row 0) and dN/deta (row 1).
inline Eigen::Matrix<double, 2, 4> quad_shape_deriv(double xi, double eta) {
  Eigen::Matrix<double, 2, 4> d;
  d << -0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta), -0.25 * (1 + eta),
      -0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi), 0.25 * (1 - xi);
  return d;
}

/// Linear line shape functions on [-1, 1].
template <typename T>
inline std::array<T, 2> line_shape(const T& xi) {
  return {0.5 * (1.0 - xi), 0.5 * (1.0 + xi)};
}

}  // namespace ehl::fe
