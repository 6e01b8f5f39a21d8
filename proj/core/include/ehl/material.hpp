#pragma once

#include "ehl/types.hpp"

namespace ehl {

/// Compressible Neo-Hookean solid,
///   Psi(C) = mu/2 (tr C - 3) - mu ln J + lambda/2 (ln J)^2,
/// evaluated in plane strain (C_33 = 1). lambda and mu are the Lame constants
/// derived from (E, nu); nu = 0 simply gives lambda = 0.
struct NeoHookeanParams {
  double young_modulus = 1.0;  // MPa
  double poisson_ratio = 0.0;
  double density = 0.0;  // t/mm^3

  double lame_lambda() const;
  double lame_mu() const;
  /// Throws DomainError unless E > 0 and -1 < nu < 0.5.
  void validate() const;
};

double strain_energy(const Mat2& F, const NeoHookeanParams& p);

/// Second Piola-Kirchhoff stress. Throws InvertedElement (element -1) if det F <= 0.
Mat2 pk2_stress(const Mat2& F, const NeoHookeanParams& p);

/// dS/dE in Voigt form, rows/cols ordered (11, 22, 12) with engineering shear
/// strain, so that dS_voigt = C * dE_voigt with dE_voigt = (dE11, dE22, 2 dE12).
Mat3 material_tangent(const Mat2& F, const NeoHookeanParams& p);

}  // namespace ehl
