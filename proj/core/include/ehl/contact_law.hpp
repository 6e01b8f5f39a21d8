#pragma once

#include "ehl/types.hpp"

#include <cmath>

namespace ehl {

/// Asperity-layer regularization. The regularized gap saturates at
/// (1 - tol) g_max so the film thickness h = g + g_max never drops below
/// tol * g_max while the contact pressure stays finite.
struct RegularizationParams {
  double g_max = 3e-3;  // mm
  double kappa = 1.0;   // MPa/mm, initial slope dp_n/d(g_hat)
  double tol = 0.01;
  double sigma = 1e-3;  // mm, combined roughness std

  double g_eff() const { return (1.0 - tol) * g_max; }
  /// h = g + g_max, summed as (g + g_eff) + tol g_max so that the saturated
  /// gap -g_eff gives exactly tol g_max.
  template <typename T>
  T film(const T& gap) const {
    return (gap + g_eff()) + tol * g_max;
  }
  /// Asperity layer modulus kappa * g_max.
  double layer_modulus() const { return kappa * g_max; }
  /// RMS roughness from g_max ~ 3 R_q.
  double rq() const { return g_max / 3.0; }
  /// Throws DomainError unless g_max > 0, kappa > 0, 0 < tol <= 1, sigma >= 0.
  void validate() const;
};

struct FrictionParams {
  double mu = 0.0;
  void validate() const;
};

enum class ContactStatus { Inactive, Stick, Slip };

/// Per-node contact quantities. lambda_t is the Cartesian tangential part;
/// in 2D it is parallel to the nodal tangent.
struct NodalContactState {
  double lambda_n = 0.0;
  Vec2 lambda_t = Vec2::Zero();
  double weighted_gap = 0.0;
  Vec2 rel_velocity = Vec2::Zero();
  ContactStatus status = ContactStatus::Inactive;
};

/// g_hat(p) = g_eff (1 - exp(-p / (kappa g_eff))). Throws DomainError for p < 0.
double regularized_gap(double p_n, const RegularizationParams& r);
double regularized_gap_slope(double p_n, const RegularizationParams& r);
/// Rule of thumb kappa = (E / 10) / g_max.
double suggest_kappa(double young_modulus, double g_max);
/// h = g + g_max. Throws ModelViolation for h <= 0.
double film_thickness(double weighted_gap, const RegularizationParams& r);

double ncp_normal(double lambda_n, double weighted_gap, const RegularizationParams& r, double c_n);
Vec2 ncp_tangential(const Vec2& lambda_t, double lambda_n, const Vec2& rel_velocity,
                    const FrictionParams& f, double c_t);
/// Status implied by the current iterate (the branch the NCP functions take).
ContactStatus classify(double lambda_n, double weighted_gap, const Vec2& lambda_t,
                       const Vec2& rel_velocity, const RegularizationParams& r,
                       const FrictionParams& f, double c_n, double c_t);

// ---------------------------------------------------------------------------
// Scalar-generic kernels used inside the Newton assembly (T may be an
// automatic-differentiation type). Negative pressures take the linear
// extension g_hat = p / kappa so the normal NCP function stays defined on
// every iterate.

namespace law {

template <typename T>
T regularized_gap(const T& p, const RegularizationParams& r) {
  using std::exp;
  if (p < 0.0) return p / r.kappa;
  const double ge = r.g_eff();
  return ge * (1.0 - exp(-p / (r.kappa * ge)));
}

template <typename T>
T ncp_normal(const T& lambda_n, const T& gap, const RegularizationParams& r, double c_n) {
  const T arg = lambda_n - c_n * (gap + regularized_gap(lambda_n, r));
  return arg > 0.0 ? T(lambda_n - arg) : lambda_n;
}

/// Scalar tangential NCP in the nodal tangent direction.
template <typename T>
T ncp_tangential(const T& lambda_t, const T& lambda_n, const T& v_t, double mu, double c_t) {
  using std::abs;
  const T z = lambda_t + c_t * v_t;
  const T bound = mu * lambda_n;
  const T az = abs(z);
  const T m = bound > az ? bound : az;
  return m * lambda_t - bound * z;
}

}  // namespace law

}  // namespace ehl
