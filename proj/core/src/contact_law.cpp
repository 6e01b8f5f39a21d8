#include "ehl/contact_law.hpp"

#include "ehl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ehl {

void RegularizationParams::validate() const {
  if (!(g_max > 0.0)) throw DomainError("g_max must be positive");
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (!(tol > 0.0 && tol <= 1.0)) throw DomainError("tol must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be non-negative");
}

void FrictionParams::validate() const {
  if (!(mu >= 0.0)) throw DomainError("friction coefficient must be non-negative");
}

double regularized_gap(double p_n, const RegularizationParams& r) {
  if (p_n < 0.0) throw DomainError("regularized_gap: negative contact pressure");
  const double ge = r.g_eff();
  return -ge * std::expm1(-p_n / (r.kappa * ge));
}

double regularized_gap_slope(double p_n, const RegularizationParams& r) {
  if (p_n < 0.0) throw DomainError("regularized_gap_slope: negative contact pressure");
  return std::exp(-p_n / (r.kappa * r.g_eff())) / r.kappa;
}

double suggest_kappa(double young_modulus, double g_max) {
  return young_modulus / (10.0 * g_max);
}

double film_thickness(double weighted_gap, const RegularizationParams& r) {
  const double h = r.film(weighted_gap);
  if (!(h > 0.0)) throw ModelViolation("non-positive film thickness");
  return h;
}

double ncp_normal(double lambda_n, double gap, const RegularizationParams& r, double c_n) {
  return law::ncp_normal(lambda_n, gap, r, c_n);
}

Vec2 ncp_tangential(const Vec2& lambda_t, double lambda_n, const Vec2& v, const FrictionParams& f,
                    double c_t) {
  const Vec2 z = lambda_t + c_t * v;
  const double bound = f.mu * lambda_n;
  return std::max(bound, z.norm()) * lambda_t - bound * z;
}

ContactStatus classify(double lambda_n, double gap, const Vec2& lambda_t, const Vec2& v,
                       const RegularizationParams& r, const FrictionParams& f, double c_n,
                       double c_t) {
  if (!(lambda_n - c_n * (gap + law::regularized_gap(lambda_n, r)) > 0.0))
    return ContactStatus::Inactive;
  return f.mu * lambda_n >= (lambda_t + c_t * v).norm() ? ContactStatus::Stick
                                                        : ContactStatus::Slip;
}

}  // namespace ehl
