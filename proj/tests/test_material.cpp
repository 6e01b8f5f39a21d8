#include "ehl/errors.hpp"
#include "ehl/material.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>

#include <random>

namespace ehl {
namespace {

NeoHookeanParams params() { return {10.0, 0.3, 0.0}; }

// Energy as a function of the Green-Lagrange strain: F = chol(C)^T has the
// same right Cauchy-Green tensor, and the law is isotropic.
double energy_of_strain(const Mat2& E, const NeoHookeanParams& p) {
  const Mat2 C = Mat2::Identity() + 2.0 * E;
  const Mat2 L = Eigen::LLT<Mat2>(C).matrixL();
  return strain_energy(L.transpose(), p);
}

Mat2 green_strain(const Mat2& F) { return 0.5 * (F.transpose() * F - Mat2::Identity()); }

Mat2 random_F(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  Mat2 F = Mat2::Identity();
  for (int i = 0; i < 4; ++i) F(i / 2, i % 2) += u(rng);
  return F;
}

TEST(NeoHookean, StressFreeReference) {
  EXPECT_NEAR(pk2_stress(Mat2::Identity(), params()).norm(), 0.0, 1e-15);
  EXPECT_NEAR(strain_energy(Mat2::Identity(), params()), 0.0, 1e-15);
}

TEST(NeoHookean, RotationIsStressFree) {
  const double a = 0.7;
  Mat2 R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  EXPECT_NEAR(pk2_stress(R, params()).norm(), 0.0, 1e-13);
}

TEST(NeoHookean, StressIsEnergyGradient) {
  Mat2 F = Mat2::Identity();
  F(0, 0) = 1.1;
  const Mat2 S = pk2_stress(F, params());
  const Mat2 E = green_strain(F);
  const double h = 1e-6;
  // S_ij = dPsi/dE_ij with symmetric perturbations.
  for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {0, 1}}) {
    Mat2 dE = Mat2::Zero();
    dE(i, j) += i == j ? 1.0 : 0.5;
    dE(j, i) += i == j ? 0.0 : 0.5;
    const double fd =
        (energy_of_strain(E + h * dE, params()) - energy_of_strain(E - h * dE, params())) / (2 * h);
    EXPECT_NEAR(fd, S(i, j), 1e-6 * S.norm()) << i << j;
  }
}

TEST(NeoHookean, TangentMatchesFiniteDifferenceOfStress) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat2 F = random_F(rng);
    ASSERT_GT(F.determinant(), 0.0);
    const Mat2 E = green_strain(F);
    const Mat3 C = material_tangent(F, params());
    auto stress_of_strain = [&](const Mat2& Es) {
      const Mat2 Cg = Mat2::Identity() + 2.0 * Es;
      const Mat2 L = Eigen::LLT<Mat2>(Cg).matrixL();
      const Mat2 S = pk2_stress(L.transpose(), params());
      return Vec3(S(0, 0), S(1, 1), S(0, 1));
    };
    const double h = 1e-6;
    for (int col = 0; col < 3; ++col) {
      Mat2 dE = Mat2::Zero();
      if (col < 2) dE(col, col) = 1.0;
      else dE(0, 1) = dE(1, 0) = 0.5;  // engineering shear
      const Vec3 fd = (stress_of_strain(E + h * dE) - stress_of_strain(E - h * dE)) / (2 * h);
      EXPECT_LT((fd - C.col(col)).norm(), 1e-5 * C.norm()) << "trial " << trial << " col " << col;
    }
  }
}

TEST(NeoHookean, TangentIsSymmetric) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat3 C = material_tangent(random_F(rng), params());
    EXPECT_EQ(C, C.transpose());
  }
}

TEST(NeoHookean, SmallStrainLimitIsIsotropicElasticity) {
  const auto p = params();
  const double lam = p.young_modulus * p.poisson_ratio /
                     ((1 + p.poisson_ratio) * (1 - 2 * p.poisson_ratio));
  const double mu = p.young_modulus / (2 * (1 + p.poisson_ratio));
  Mat3 ref;
  ref << lam + 2 * mu, lam, 0, lam, lam + 2 * mu, 0, 0, 0, mu;
  EXPECT_LT((material_tangent(Mat2::Identity(), p) - ref).norm(), 1e-12 * ref.norm());
  EXPECT_NEAR(p.lame_lambda(), lam, 1e-14);
  EXPECT_NEAR(p.lame_mu(), mu, 1e-14);
}

TEST(NeoHookean, RejectsInvalidParameters) {
  EXPECT_THROW((NeoHookeanParams{-1.0, 0.3, 0.0}.validate()), DomainError);
  EXPECT_THROW((NeoHookeanParams{1.0, 0.5, 0.0}.validate()), DomainError);
  EXPECT_THROW((NeoHookeanParams{1.0, -1.0, 0.0}.validate()), DomainError);
  EXPECT_NO_THROW(params().validate());
}

TEST(NeoHookean, InvertedDeformationThrows) {
  Mat2 F = Mat2::Identity();
  F(0, 0) = -0.5;
  EXPECT_THROW(pk2_stress(F, params()), Error);
}

}  // namespace
}  // namespace ehl
