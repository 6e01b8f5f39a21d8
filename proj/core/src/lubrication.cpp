#include "ehl/lubrication.hpp"

#include "ehl/errors.hpp"
#include "kernels.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace ehl {

void FluidParams::validate() const {
  if (!(eta > 0.0)) throw DomainError("viscosity must be positive");
  if (!(penalty_eps > 0.0)) throw DomainError("cavitation penalty must be positive");
  if (!(sigma >= 0.0)) throw DomainError("roughness must be non-negative");
  if (!(density >= 0.0)) throw DomainError("fluid density must be non-negative");
}

FlowFactors flow_factors(double h, double sigma) {
  if (!(h > 0.0)) throw DomainError("flow_factors: film thickness must be positive");
  const auto f = kernel::flow_factors(h, sigma);
  return {f.phi_p, f.phi_s, f.phi_f};
}

VecX InterfaceGeometry::nodal_weights() const {
  VecX w = VecX::Zero(num_nodes());
  for (Index e = 0; e + 1 < num_nodes(); ++e) {
    if (!lubricated[e]) continue;
    const double len = (x[e + 1] - x[e]).norm();
    w[e] += 0.5 * len;
    w[e + 1] += 0.5 * len;
  }
  return w;
}

VecX cavitation_term(const VecX& p, const VecX& w, double eps) {
  return -eps * (-p).cwiseMax(0.0).cwiseProduct(w);
}

namespace {

kernel::ReynoldsFacet<double> facet_data(const InterfaceGeometry& geo, const LubricationField& f,
                                         Index e) {
  kernel::ReynoldsFacet<double> rf;
  for (int a = 0; a < 2; ++a) {
    const Index k = e + a;
    rf.x[a] = geo.x[k];
    rf.p[a] = f.p[k];
    rf.h[a] = f.h[k];
    rf.h_prev[a] = f.h_prev.size() ? f.h_prev[k] : f.h[k];
    rf.v_sum[a] = 0.5 * (f.v_slave[k] + f.v_master[k]);
    rf.v_diff[a] = 0.5 * (f.v_slave[k] - f.v_master[k]);
  }
  return rf;
}

}  // namespace

VecX reynolds_residual(const InterfaceGeometry& geo, const LubricationField& field,
                       const FluidParams& fluid, double dt, ReynoldsTerms* terms) {
  const Index n = geo.num_nodes();
  const double inv_dt = dt > 0.0 ? 1.0 / dt : 0.0;
  VecX r = VecX::Zero(n);
  if (terms) {
    for (VecX* v : {&terms->poiseuille, &terms->squeeze, &terms->couette, &terms->shear})
      v->setZero(n);
  }
  for (Index e = 0; e + 1 < n; ++e) {
    if (!geo.lubricated[e]) continue;
    if (!(field.h[e] > 0.0 && field.h[e + 1] > 0.0))
      throw ModelViolation("non-positive film thickness on interface facet " + std::to_string(e));
    const auto rf = facet_data(geo, field, e);
    double out[2] = {0.0, 0.0};
    double parts[4][2] = {{0, 0}, {0, 0}, {0, 0}, {0, 0}};
    try {
      kernel::reynolds_facet(rf, fluid, inv_dt, out, parts);
    } catch (const ModelViolation&) {
      throw ModelViolation("non-positive film thickness on interface facet " + std::to_string(e));
    }
    r[e] += out[0];
    r[e + 1] += out[1];
    if (terms)
      for (int a = 0; a < 2; ++a) {
        terms->poiseuille[e + a] += parts[0][a];
        terms->squeeze[e + a] += parts[1][a];
        terms->couette[e + a] += parts[2][a];
        terms->shear[e + a] += parts[3][a];
      }
  }
  const VecX cav = cavitation_term(field.p, geo.nodal_weights(), fluid.penalty_eps);
  r += cav;
  if (terms) terms->cavitation = cav;
  return r;
}

VecX classical_reynolds_residual(const InterfaceGeometry& geo, const LubricationField& f,
                                 double eta, double eps, double dt) {
  const Index n = geo.num_nodes();
  VecX r = VecX::Zero(n);
  for (Index e = 0; e + 1 < n; ++e) {
    if (!geo.lubricated[e]) continue;
    const Vec2 edge = geo.x[e + 1] - geo.x[e];
    const double len = edge.norm();
    const Vec2 t = edge / len;
    const double h0 = f.h[e], h1 = f.h[e + 1];
    if (!(h0 > 0.0 && h1 > 0.0)) throw ModelViolation("non-positive film thickness");
    // exact integral of a linear h cubed
    const double int_h3 = len * (h0 + h1) * (h0 * h0 + h1 * h1) / 4.0;
    const double q = int_h3 / (12.0 * eta) * (f.p[e + 1] - f.p[e]) / (len * len);
    // Couette: int u h dN/ds with u, h linear (Simpson is exact)
    const double u0 = 0.5 * (f.v_slave[e] + f.v_master[e]).dot(t);
    const double u1 = 0.5 * (f.v_slave[e + 1] + f.v_master[e + 1]).dot(t);
    const double um = 0.5 * (u0 + u1), hm = 0.5 * (h0 + h1);
    const double int_uh = len / 6.0 * (u0 * h0 + 4.0 * um * hm + u1 * h1);
    const double c = int_uh / len;
    r[e] += -q + c;
    r[e + 1] += q - c;
    if (dt > 0.0) {
      const double s0 = (h0 - f.h_prev[e]) / dt, s1 = (h1 - f.h_prev[e + 1]) / dt;
      r[e] += len / 6.0 * (2.0 * s0 + s1);
      r[e + 1] += len / 6.0 * (s0 + 2.0 * s1);
    }
    for (Index k : {e, e + 1})
      if (f.p[k] < 0.0) r[k] += eps * f.p[k] * 0.5 * len;
  }
  return r;
}

FluidTraction fluid_traction(const InterfaceGeometry& geo, const LubricationField& f,
                             const FluidParams& fluid, const std::vector<Vec2>& grad_p, Index k) {
  FluidTraction t;
  Vec2 par;
  const Vec2 total = kernel::fluid_traction_total<double>(
      f.p[k], f.h[k], geo.normal[k], grad_p[k], Vec2(0.5 * (f.v_slave[k] - f.v_master[k])), fluid,
      &par);
  t.parallel = par;
  t.nonparallel = total - par;
  return t;
}

ReynoldsSolveResult solve_reynolds(const InterfaceGeometry& geo, const LubricationField& field,
                                   const FluidParams& fluid, const std::vector<bool>& fixed,
                                   const ReynoldsSolveOptions& opts) {
  const Index n = geo.num_nodes();
  std::vector<Index> pos(n, -1);
  Index nu = 0;
  for (Index k = 0; k < n; ++k)
    if (!fixed[k]) pos[k] = nu++;
  const VecX w = geo.nodal_weights();

  // Poiseuille operator; linear in p for a fixed film.
  std::vector<Triplet> kt;
  for (Index e = 0; e + 1 < n; ++e) {
    if (!geo.lubricated[e]) continue;
    const double len = (geo.x[e + 1] - geo.x[e]).norm();
    double c = 0.0;
    for (const auto& gp : fe::gauss_line(5)) {
      const auto N = fe::line_shape(gp.xi);
      const double h = N[0] * field.h[e] + N[1] * field.h[e + 1];
      c += gp.weight * 0.5 * len * h * h * h / (12.0 * fluid.eta) *
           kernel::flow_factors(h, fluid.sigma).phi_p;
    }
    c /= len * len;
    const double sgn[2] = {-1.0, 1.0};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const Index i = pos[e + a], j = pos[e + b];
        if (i >= 0 && j >= 0) kt.emplace_back(i, j, c * sgn[a] * sgn[b]);
      }
  }

  LubricationField f = field;
  ReynoldsSolveResult res;
  std::vector<bool> cav_prev(n, false);
  Eigen::SparseLU<SparseMatrix> lu;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const VecX r = reynolds_residual(geo, f, fluid, opts.dt);
    std::vector<Triplet> jt = kt;
    std::vector<bool> cav(n, false);
    for (Index k = 0; k < n; ++k) {
      cav[k] = f.p[k] < 0.0;
      if (cav[k] && pos[k] >= 0) jt.emplace_back(pos[k], pos[k], fluid.penalty_eps * w[k]);
    }
    SparseMatrix J(nu, nu);
    J.setFromTriplets(jt.begin(), jt.end());
    VecX rf(nu);
    for (Index k = 0; k < n; ++k)
      if (pos[k] >= 0) rf[pos[k]] = r[k];
    lu.compute(J);
    if (lu.info() != Eigen::Success) throw StepFailure("singular Reynolds operator");
    const VecX dp = lu.solve(-rf);
    double pmax = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (pos[k] >= 0) f.p[k] += dp[pos[k]];
      pmax = std::max(pmax, std::abs(f.p[k]));
    }
    res.iterations = it;
    const bool settled = cav == cav_prev && it > 1;
    cav_prev = cav;
    if (settled && dp.lpNorm<Eigen::Infinity>() <= opts.tolerance * std::max(pmax, 1e-300)) {
      res.p = f.p;
      return res;
    }
    // the cavitation set did not change and the step was exact for this set
    bool same = true;
    for (Index k = 0; k < n; ++k) same = same && ((f.p[k] < 0.0) == cav[k]);
    if (same) {
      res.p = f.p;
      return res;
    }
  }
  throw StepFailure("Reynolds solve did not converge");
}

}  // namespace ehl
