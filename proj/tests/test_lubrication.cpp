#include "ehl/errors.hpp"
#include "ehl/lubrication.hpp"
#include "ehl/mortar.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <random>

namespace ehl {
namespace {

// ---------------------------------------------------------------------------
// Oracles

/// Slider bearing: film h = h1 + s x on [0, L], slave at rest, master at U,
/// p(0) = p(L) = 0. Constant flux q = u h - h^3 p' / (12 eta) with u = U/2.
struct SliderOracle {
  double L, h1, h2, U, eta;
  double s() const { return (h2 - h1) / L; }
  double h(double x) const { return h1 + s() * x; }
  // int_0^x h^-n
  double I(int n, double x) const {
    return (std::pow(h(x), 1 - n) - std::pow(h1, 1 - n)) / ((1 - n) * s());
  }
  double q() const { return 0.5 * U * I(2, L) / I(3, L); }
  double p(double x) const { return 12.0 * eta * (0.5 * U * I(2, x) - q() * I(3, x)); }
  double load() const {
    const int n = 20000;  // composite Simpson of the closed form
    double acc = p(0) + p(L);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * p(L * i / n);
    return acc * L / (3.0 * n);
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix.
std::pair<VecX, VecX> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  return {es.eigenvalues(), 2.0 * es.eigenvectors().row(0).array().square().matrix().transpose()};
}

/// Brute-force residual: every facet split into 64 pieces, 12-point Gauss on
/// each, flow factors written out again.
VecX dense_residual(const InterfaceGeometry& g, const LubricationField& f, const FluidParams& fl,
                    double dt) {
  const auto [xi, wq] = gauss_legendre(12);
  const Index n = g.num_nodes();
  VecX r = VecX::Zero(n);
  for (Index e = 0; e + 1 < n; ++e) {
    if (!g.lubricated[e]) continue;
    const Vec2 edge = g.x[e + 1] - g.x[e];
    const double len = edge.norm();
    const Vec2 t = edge / len;
    const double dp = (f.p[e + 1] - f.p[e]) / len;
    const int pieces = 64;
    for (int k = 0; k < pieces; ++k)
      for (int q = 0; q < xi.size(); ++q) {
        const double u = (k + 0.5 * (xi[q] + 1.0)) / pieces;  // in [0, 1]
        const double w = wq[q] * 0.5 * len / pieces;
        const double N[2] = {1.0 - u, u};
        const double dN[2] = {-1.0 / len, 1.0 / len};
        const double h = N[0] * f.h[e] + N[1] * f.h[e + 1];
        const double r2 = std::pow(fl.sigma / h, 2), r1 = fl.sigma / h;
        const double phi_p = 1.0 + 3.0 * r2;
        const double phi_s = (-3.0 * r1 - 30.0 * r1 * r2) / (1.0 + 6.0 * r2);
        const double vp = 0.5 * (N[0] * (f.v_slave[e] + f.v_master[e]).dot(t) +
                                 N[1] * (f.v_slave[e + 1] + f.v_master[e + 1]).dot(t));
        const double vm = 0.5 * (N[0] * (f.v_slave[e] - f.v_master[e]).dot(t) +
                                 N[1] * (f.v_slave[e + 1] - f.v_master[e + 1]).dot(t));
        const double hp = N[0] * f.h_prev[e] + N[1] * f.h_prev[e + 1];
        for (int a = 0; a < 2; ++a) {
          r[e + a] += w * (std::pow(h, 3) / (12.0 * fl.eta) * phi_p * dp * dN[a] -
                           vp * h * dN[a] - vm * fl.sigma * phi_s * dN[a]);
          if (dt > 0.0) r[e + a] += w * (h - hp) / dt * N[a];
        }
      }
  }
  const VecX wts = g.nodal_weights();
  for (Index k = 0; k < n; ++k)
    if (f.p[k] < 0.0) r[k] += fl.penalty_eps * f.p[k] * wts[k];
  return r;
}

// ---------------------------------------------------------------------------
// Fixtures

InterfaceGeometry straight_line(Index facets, double L, double angle = 0.0) {
  InterfaceGeometry g;
  const Vec2 t(std::cos(angle), std::sin(angle));
  const Vec2 n(t.y(), -t.x());
  for (Index i = 0; i <= facets; ++i) {
    g.x.push_back(L * double(i) / facets * t);
    g.normal.push_back(n);
  }
  g.lubricated.assign(facets, true);
  return g;
}

LubricationField field_on(const InterfaceGeometry& g, const std::function<double(double)>& h,
                          Vec2 v_master) {
  LubricationField f;
  const Index n = g.num_nodes();
  f.p = VecX::Zero(n);
  f.h.resize(n);
  for (Index k = 0; k < n; ++k) f.h[k] = h(g.x[k].norm());
  f.h_prev = f.h;
  f.v_slave.assign(n, Vec2::Zero());
  f.v_master.assign(n, v_master);
  return f;
}

std::vector<bool> ends_fixed(Index n) {
  std::vector<bool> fx(n, false);
  fx.front() = fx.back() = true;
  return fx;
}

LubricationField random_field(const InterfaceGeometry& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LubricationField f;
  const Index n = g.num_nodes();
  f.p.resize(n);
  f.h.resize(n);
  f.h_prev.resize(n);
  for (Index k = 0; k < n; ++k) {
    f.p[k] = 0.01 * u(rng);
    f.h[k] = 2e-3 * (1.5 + u(rng));
    f.h_prev[k] = f.h[k] * (1.0 + 0.1 * u(rng));
    f.v_slave.emplace_back(0.1 * u(rng), 0.1 * u(rng));
    f.v_master.emplace_back(0.3 * u(rng), 0.1 * u(rng));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Flow factors

TEST(FlowFactors, SmoothLimit) {
  const FlowFactors f = flow_factors(1e-3, 0.0);
  EXPECT_EQ(f.phi_p, 1.0);
  EXPECT_EQ(f.phi_s, 0.0);
  EXPECT_EQ(f.phi_f, 1.0);
}

TEST(FlowFactors, ClosedFormValues) {
  const FlowFactors a = flow_factors(2e-3, 2e-3);
  EXPECT_NEAR(a.phi_p, 4.0, 1e-14);
  EXPECT_NEAR(a.phi_s, -33.0 / 7.0, 1e-14);
  EXPECT_NEAR(a.phi_f, 2.0, 1e-14);
  EXPECT_NEAR(flow_factors(2e-3, 1e-3).phi_p, 1.75, 1e-14);
}

TEST(FlowFactors, NonPositiveFilmThrows) {
  EXPECT_THROW(flow_factors(0.0, 1e-3), DomainError);
  EXPECT_THROW(flow_factors(-1e-3, 1e-3), DomainError);
}

// ---------------------------------------------------------------------------
// Residual

TEST(ReynoldsResidual, ParallelPlatesAtRestHaveZeroResidual) {
  const auto g = straight_line(10, 1.0);
  const auto f = field_on(g, [](double) { return 2e-3; }, Vec2::Zero());
  EXPECT_EQ(reynolds_residual(g, f, FluidParams{}, 0.1).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(ReynoldsResidual, MatchesDenseQuadrature) {
  std::mt19937 rng(3);
  const auto g = straight_line(12, 0.8, 0.4);
  for (double sigma : {0.0, 1e-3}) {
    FluidParams fl;
    fl.sigma = sigma;
    for (int k = 0; k < 5; ++k) {
      const auto f = random_field(g, rng);
      const VecX r = reynolds_residual(g, f, fl, 0.05);
      const VecX ref = dense_residual(g, f, fl, 0.05);
      EXPECT_LT((r - ref).lpNorm<Eigen::Infinity>(), 1e-12 * ref.lpNorm<Eigen::Infinity>())
          << "sigma " << sigma;
    }
  }
}

TEST(ReynoldsResidual, SmoothSurfacesGiveClassicalReynolds) {
  std::mt19937 rng(4);
  const auto g = straight_line(9, 1.3, -0.2);
  FluidParams fl;
  fl.sigma = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto f = random_field(g, rng);
    for (double dt : {0.0, 0.02}) {
      const VecX r = reynolds_residual(g, f, fl, dt);
      const VecX c = classical_reynolds_residual(g, f, fl.eta, fl.penalty_eps, dt);
      EXPECT_LT((r - c).lpNorm<Eigen::Infinity>(), 1e-12 * c.lpNorm<Eigen::Infinity>());
    }
  }
}

TEST(ReynoldsResidual, TermsSumToResidual) {
  std::mt19937 rng(5);
  const auto g = straight_line(7, 1.0);
  const auto f = random_field(g, rng);
  FluidParams fl;
  ReynoldsTerms t;
  const VecX r = reynolds_residual(g, f, fl, 0.1, &t);
  const VecX sum = t.poiseuille + t.squeeze + t.couette + t.shear + t.cavitation;
  EXPECT_LT((r - sum).lpNorm<Eigen::Infinity>(), 1e-14 * r.lpNorm<Eigen::Infinity>());
}

TEST(ReynoldsResidual, PoiseuilleOperatorIsSymmetricPositiveSemidefinite) {
  std::mt19937 rng(6);
  const auto g = straight_line(10, 1.0, 0.3);
  auto f = random_field(g, rng);
  for (auto& v : f.v_slave) v.setZero();
  for (auto& v : f.v_master) v.setZero();
  FluidParams fl;
  const Index n = g.num_nodes();
  Eigen::MatrixXd K(n, n);
  for (Index j = 0; j < n; ++j) {
    f.p = VecX::Unit(n, j);
    ReynoldsTerms t;
    reynolds_residual(g, f, fl, 0.0, &t);
    K.col(j) = t.poiseuille;
  }
  EXPECT_LT((K - K.transpose()).norm(), 1e-12 * K.norm());
  std::normal_distribution<double> nd;
  for (int k = 0; k < 50; ++k) {
    VecX x(n);
    for (Index i = 0; i < n; ++i) x[i] = nd(rng);
    EXPECT_GE(x.dot(K * x), -1e-12 * K.norm() * x.squaredNorm());
  }
  EXPECT_LT((K * VecX::Ones(n)).norm(), 1e-12 * K.norm());
}

TEST(ReynoldsResidual, NonPositiveFilmThrows) {
  const auto g = straight_line(4, 1.0);
  auto f = field_on(g, [](double) { return 1e-3; }, Vec2::Zero());
  f.h[2] = 0.0;
  EXPECT_THROW(reynolds_residual(g, f, FluidParams{}, 0.0), ModelViolation);
}

TEST(ReynoldsResidual, ShearInputFrameIndifferent) {
  std::mt19937 rng(8);
  const auto g = straight_line(6, 1.0, 0.5);
  auto f = random_field(g, rng);
  ReynoldsTerms a, b;
  reynolds_residual(g, f, FluidParams{}, 0.0, &a);
  const Vec2 c(0.7, -0.4);
  for (auto& v : f.v_slave) v += c;
  for (auto& v : f.v_master) v += c;
  reynolds_residual(g, f, FluidParams{}, 0.0, &b);
  EXPECT_LT((a.shear - b.shear).lpNorm<Eigen::Infinity>(),
            1e-14 * a.shear.lpNorm<Eigen::Infinity>());
}

// ---------------------------------------------------------------------------
// Slider bearing

TEST(SliderBearing, PressureConvergesAtSecondOrder) {
  const SliderOracle o{1.0, 2e-3, 1e-3, 0.1, 4e-8};
  FluidParams fl;
  fl.sigma = 0.0;
  std::vector<double> err;
  for (Index n : {16, 32, 64, 128}) {
    const auto g = straight_line(n, o.L);
    const auto f = field_on(g, [&](double x) { return o.h(x); }, Vec2(o.U, 0.0));
    const auto sol = solve_reynolds(g, f, fl, ends_fixed(n + 1));
    double e2 = 0.0;
    for (Index k = 0; k <= n; ++k) e2 += std::pow(sol.p[k] - o.p(g.x[k].x()), 2);
    err.push_back(std::sqrt(e2 / (n + 1)));
    EXPECT_GT(sol.p[n / 2], 0.0);
  }
  for (size_t k = 1; k < err.size(); ++k)
    EXPECT_GE(std::log2(err[k - 1] / err[k]), 1.9) << k;
}

TEST(SliderBearing, LoadCapacityFromTraction) {
  const SliderOracle o{1.0, 2e-3, 1e-3, 0.1, 4e-8};
  FluidParams fl;
  fl.sigma = 0.0;
  const Index n = 128;
  const auto g = straight_line(n, o.L);
  auto f = field_on(g, [&](double x) { return o.h(x); }, Vec2(o.U, 0.0));
  f.p = solve_reynolds(g, f, fl, ends_fixed(n + 1)).p;
  const auto grad = smooth_nodal_traction_gradient(g.x, f.p, g.lubricated);
  const VecX w = g.nodal_weights();
  double W = 0.0;
  for (Index k = 0; k <= n; ++k) W += w[k] * fluid_traction(g, f, fl, grad, k).nonparallel.y();
  EXPECT_NEAR(W, o.load(), 0.02 * o.load());
}

// ---------------------------------------------------------------------------
// Cavitation

TEST(Cavitation, TermIsPenaltyTimesWeight) {
  VecX p(3);
  p << 0.2, -1e-3, 0.0;
  const VecX w = VecX::Constant(3, 0.25);
  const VecX c = cavitation_term(p, w, 1e8);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[2], 0.0);
  EXPECT_NEAR(std::abs(c[1]), 1e5 * 0.25, 1e-9);
  EXPECT_EQ(cavitation_term(VecX::Constant(3, 0.1), w, 1e8).norm(), 0.0);
}

TEST(Cavitation, NegativePressureShrinksWithPenalty) {
  // convergent-divergent film; the divergent half wants sub-ambient pressure
  const Index n = 80;
  const auto g = straight_line(n, 1.0);
  const auto f = field_on(g, [](double x) { return 1e-3 + 4e-3 * (x - 0.5) * (x - 0.5); },
                          Vec2(0.1, 0.0));
  double prev = 0.0;
  for (double eps : {1e6, 1e8}) {
    FluidParams fl;
    fl.sigma = 0.0;
    fl.penalty_eps = eps;
    const auto sol = solve_reynolds(g, f, fl, ends_fixed(n + 1));
    const double pmin = sol.p.minCoeff();
    EXPECT_LT(pmin, 0.0);
    // the penalty balances at most the Couette flux u h_max into a node
    EXPECT_GE(pmin, -0.05 * 2e-3 / (eps * g.nodal_weights()[1]));
    EXPECT_GT(sol.p.maxCoeff(), 0.0);
    if (eps >= 1e8) EXPECT_GE(pmin, -1e-6);
    if (prev < 0.0) EXPECT_LT(std::abs(pmin), 0.1 * std::abs(prev));
    prev = pmin;
  }
}

// ---------------------------------------------------------------------------
// Traction

TEST(FluidTraction, Limits) {
  const auto g = straight_line(4, 1.0, 0.25);
  auto f = field_on(g, [](double) { return 2e-3; }, Vec2::Zero());
  FluidParams fl;
  const std::vector<Vec2> zero(5, Vec2::Zero());
  auto t = fluid_traction(g, f, fl, zero, 2);
  EXPECT_EQ(t.parallel.norm(), 0.0);
  EXPECT_EQ(t.nonparallel.norm(), 0.0);

  f.p.setConstant(0.3);
  t = fluid_traction(g, f, fl, zero, 2);
  EXPECT_EQ((t.nonparallel + 0.3 * g.normal[2]).norm(), 0.0);
  EXPECT_EQ(t.parallel.norm(), 0.0);

  // smooth Couette shear: -(eta / h) (v_s - v_m) / 2
  fl.sigma = 0.0;
  f.p.setZero();
  f.v_master.assign(5, Vec2(0.2, 0.0));
  t = fluid_traction(g, f, fl, zero, 2);
  EXPECT_NEAR(t.nonparallel.x(), fl.eta / 2e-3 * 0.1, 1e-20);
}

TEST(FluidTraction, PoiseuilleShearOpposesGradient) {
  const auto g = straight_line(4, 1.0);
  auto f = field_on(g, [](double) { return 2e-3; }, Vec2::Zero());
  FluidParams fl;
  fl.sigma = 1e-3;
  const std::vector<Vec2> grad(5, Vec2(0.5, 0.0));
  const auto t = fluid_traction(g, f, fl, grad, 1);
  EXPECT_NEAR(t.parallel.x(), -0.5 * 2e-3 * 1.75 * 0.5, 1e-16);
}

}  // namespace
}  // namespace ehl
