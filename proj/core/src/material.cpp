#include "ehl/material.hpp"

#include "ehl/errors.hpp"

#include <cmath>

namespace ehl {

double NeoHookeanParams::lame_lambda() const {
  return young_modulus * poisson_ratio /
         ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
}

double NeoHookeanParams::lame_mu() const {
  return young_modulus / (2.0 * (1.0 + poisson_ratio));
}

void NeoHookeanParams::validate() const {
  if (!(young_modulus > 0.0)) throw DomainError("Young's modulus must be positive");
  if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
    throw DomainError("Poisson's ratio must lie in (-1, 0.5)");
  if (density < 0.0) throw DomainError("density must be non-negative");
}

namespace {

double checked_det(const Mat2& F) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw InvertedElement("det F <= 0", -1);
  return J;
}

}  // namespace

double strain_energy(const Mat2& F, const NeoHookeanParams& p) {
  const double J = checked_det(F);
  const double lnJ = std::log(J);
  const double mu = p.lame_mu();
  const double trC = F.squaredNorm() + 1.0;
  return 0.5 * mu * (trC - 3.0) - mu * lnJ + 0.5 * p.lame_lambda() * lnJ * lnJ;
}

Mat2 pk2_stress(const Mat2& F, const NeoHookeanParams& p) {
  const double lnJ = std::log(checked_det(F));
  const Mat2 Cinv = (F.transpose() * F).inverse();
  const double mu = p.lame_mu();
  return mu * (Mat2::Identity() - Cinv) + p.lame_lambda() * lnJ * Cinv;
}

Mat3 material_tangent(const Mat2& F, const NeoHookeanParams& p) {
  const double lnJ = std::log(checked_det(F));
  const Mat2 Ci = (F.transpose() * F).inverse();
  const double lam = p.lame_lambda();
  const double coef = p.lame_mu() - lam * lnJ;
  constexpr int I[3] = {0, 1, 0};
  constexpr int J[3] = {0, 1, 1};
  Mat3 C;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const int i = I[a], j = J[a], k = I[b], l = J[b];
      C(a, b) = lam * Ci(i, j) * Ci(k, l) + coef * (Ci(i, k) * Ci(j, l) + Ci(i, l) * Ci(j, k));
    }
  return 0.5 * (C + C.transpose()).eval();  // exact major symmetry
}

}  // namespace ehl
