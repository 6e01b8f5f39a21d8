#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SparseCore>

#include <cstddef>
#include <cstdint>

namespace ehl {

// Units throughout: mm, s, MPa (N/mm^2), tonne. Forces are per unit
// out-of-plane depth (N/mm) since everything is plane strain.

using Index = std::int64_t;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline constexpr int kDim = 2;

enum class Body : int { Slave = 1, Master = 2 };

}  // namespace ehl
