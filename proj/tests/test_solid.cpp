#include "support.hpp"

#include "ehl/errors.hpp"
#include "ehl/solid.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <random>

namespace ehl {
namespace {

const NeoHookeanParams kMat{10.0, 0.3, 1e-6};

VecX random_displacement(const Mesh& m, double amp, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  VecX d(m.num_dofs());
  for (Index i = 0; i < d.size(); ++i) d[i] = u(rng);
  return d;
}

TEST(InternalForce, ZeroAtReference) {
  const Mesh m = test::block_mesh(3, 2, 1.0, 0.5);
  EXPECT_EQ(internal_force(m, kMat, VecX::Zero(m.num_dofs())).norm(), 0.0);
}

TEST(InternalForce, RigidTranslationIsForceFree) {
  const Mesh m = test::block_mesh(3, 2, 1.0, 0.5);
  VecX d(m.num_dofs());
  for (Index n = 0; n < m.num_nodes(); ++n) d.segment<2>(2 * n) = Vec2(0.3, -0.7);
  const double kscale = Eigen::MatrixXd(stiffness(m, kMat, VecX::Zero(m.num_dofs()))).norm();
  EXPECT_LT(internal_force(m, kMat, d).norm(), 1e-12 * kscale);
}

TEST(InternalForce, SingleElementUniaxialStretchByHand) {
  const Mesh m = test::block_mesh(1, 1, 1.0, 1.0);
  const double e = 0.1;
  VecX d = VecX::Zero(8);
  for (Index n = 0; n < 4; ++n) d[2 * n] = e * m.nodes[n].x();
  Mat2 F = Mat2::Identity();
  F(0, 0) += e;
  const Mat2 P = F * pk2_stress(F, kMat);
  // int grad N_a over the unit square: (+-1/2, +-1/2) pointing away from the centre
  const VecX f = internal_force(m, kMat, d);
  for (Index n = 0; n < 4; ++n) {
    const Vec2 g(m.nodes[n].x() > 0.5 ? 0.5 : -0.5, m.nodes[n].y() > 0.5 ? 0.5 : -0.5);
    EXPECT_LT((f.segment<2>(2 * n) - P * g).norm(), 1e-13) << n;
  }
}

TEST(Stiffness, MatchesFiniteDifferenceOfInternalForce) {
  const Mesh m = test::block_mesh(3, 3, 1.0, 1.0);
  const VecX d = random_displacement(m, 0.05, 1);
  const SparseMatrix K = stiffness(m, kMat, d);
  std::mt19937 rng(2);
  std::normal_distribution<double> nd;
  for (int probe = 0; probe < 5; ++probe) {
    VecX v(d.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = nd(rng);
    const double h = 1e-6;
    const VecX fd = (internal_force(m, kMat, d + h * v) - internal_force(m, kMat, d - h * v)) / (2 * h);
    const VecX kv = K * v;
    EXPECT_LT((fd - kv).norm(), 1e-6 * kv.norm());
  }
}

TEST(Stiffness, SymmetricAndLinearAtReference) {
  const Mesh m = test::block_mesh(2, 2, 1.0, 1.0);
  const Eigen::MatrixXd K = Eigen::MatrixXd(stiffness(m, kMat, random_displacement(m, 0.05, 4)));
  EXPECT_LT((K - K.transpose()).norm(), 1e-12 * K.norm());

  // at d = 0 the stiffness is the small-strain one: int B^T C_lin B
  const Eigen::MatrixXd K0 = Eigen::MatrixXd(stiffness(m, kMat, VecX::Zero(m.num_dofs())));
  const double h = 1e-7;
  Eigen::MatrixXd Klin(K0.rows(), K0.cols());
  for (Index j = 0; j < K0.cols(); ++j) {
    VecX e = VecX::Zero(K0.cols());
    e[j] = h;
    Klin.col(j) = (internal_force(m, kMat, e) - internal_force(m, kMat, -e)) / (2 * h);
  }
  EXPECT_LT((K0 - Klin).norm(), 1e-6 * K0.norm());
}

TEST(InvertedElement, CarriesElementId) {
  const Mesh m = test::block_mesh(2, 1, 2.0, 1.0);
  VecX d = VecX::Zero(m.num_dofs());
  d[2 * 1] = 3.0;  // bottom middle node far to the right: inverts element 1 -> 0 overlap
  try {
    internal_force(m, kMat, d);
    FAIL() << "expected InvertedElement";
  } catch (const InvertedElement& e) {
    EXPECT_GE(e.element(), 0);
  }
}

TEST(MassMatrix, TotalMassAndSymmetry) {
  const Mesh m = test::block_mesh(3, 2, 1.5, 0.5);
  const Eigen::MatrixXd M = Eigen::MatrixXd(mass_matrix(m, 2.0));
  VecX ones_x = VecX::Zero(m.num_dofs());
  for (Index n = 0; n < m.num_nodes(); ++n) ones_x[2 * n] = 1.0;
  EXPECT_NEAR(ones_x.dot(M * ones_x), 2.0 * 1.5 * 0.5, 1e-12);
  EXPECT_LT((M - M.transpose()).norm(), 1e-15);
}

TEST(GeneralizedAlpha, SecondOrderRelations) {
  for (double rho : {0.0, 0.3, 0.9, 1.0}) {
    const auto c = GeneralizedAlphaCoefficients::from_spectral_radius(rho);
    EXPECT_NEAR(c.gamma, 0.5 - c.alpha_m + c.alpha_f, 1e-15);
    EXPECT_NEAR(c.beta, 0.25 * std::pow(1 - c.alpha_m + c.alpha_f, 2), 1e-15);
  }
  const auto c1 = GeneralizedAlphaCoefficients::from_spectral_radius(1.0);
  EXPECT_DOUBLE_EQ(c1.alpha_m, 0.5);
  EXPECT_DOUBLE_EQ(c1.alpha_f, 0.5);
  EXPECT_DOUBLE_EQ(c1.gamma, 0.5);
  EXPECT_DOUBLE_EQ(c1.beta, 0.25);
  EXPECT_THROW(GeneralizedAlphaCoefficients::from_spectral_radius(1.5), DomainError);
}

// Single-dof oscillator m a + k d = 0 advanced through the same step
// kinematics and residual weighting as the solid, against the trapezoidal
// rule on the first-order system.
TEST(GeneralizedAlpha, UndampedVariantMatchesTrapezoidalRule) {
  const double mass = 2.0, k = 50.0, dt = 0.01;
  TimeIntegrator ti{TimeScheme::GeneralizedAlpha, 1.0};
  SolidState s = SolidState::zero(1);
  s.d[0] = 0.1;
  s.a[0] = -k / mass * s.d[0];
  Eigen::Matrix2d A;
  A << 0, 1, -k / mass, 0;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d T = (I - 0.5 * dt * A).inverse() * (I + 0.5 * dt * A);
  Eigen::Vector2d x(s.d[0], s.v[0]);
  for (int n = 0; n < 500; ++n) {
    const StepKinematics kin = step_kinematics(ti, s, dt);
    // w_i m (ca (d - d_n) + a_off) + alpha_m m a_n + w_f k d + (1 - w_f) k d_n = 0
    const double lhs = kin.w_inertia * mass * kin.ca + kin.w_force * k;
    const double rhs = -(kin.w_inertia * mass * (kin.a_off[0] - kin.ca * s.d[0]) +
                         kin.alpha_m * mass * s.a[0] + (1 - kin.w_force) * k * s.d[0]);
    VecX d(1);
    d[0] = rhs / lhs;
    SolidState next{d, kin.velocity(d, s.d), kin.acceleration(d, s.d), s.t + dt};
    s = next;
    x = T * x;
    ASSERT_NEAR(s.d[0], x[0], 1e-10) << n;
    ASSERT_NEAR(s.v[0], x[1], 1e-10) << n;
  }
}

SolidProblem fixed_block(const Mesh& m) {
  SolidProblem pb;
  pb.mesh = &m;
  pb.material = kMat;
  pb.dofs = DofMap(m.num_nodes());
  pb.dofs.fix_set(m, BoundarySet::Dirichlet, 0, [](double) { return 0.0; });
  pb.dofs.fix_set(m, BoundarySet::Dirichlet, 1, [](double) { return 0.0; });
  return pb;
}

TEST(SolidStep, ZeroLoadsKeepState) {
  const Mesh m = test::block_mesh(3, 3, 1.0, 1.0);
  for (auto scheme : {TimeScheme::QuasiStatic, TimeScheme::GeneralizedAlpha}) {
    SolidProblem pb = fixed_block(m);
    pb.integrator.scheme = scheme;
    const SolidState s0 = SolidState::zero(m.num_dofs());
    const SolidState s1 = step(pb, s0, 0.1);
    EXPECT_EQ(s1.d.norm(), 0.0);
    EXPECT_EQ(s1.v.norm(), 0.0);
  }
}

TEST(SolidStep, SmallGravityMatchesLinearSolve) {
  const Mesh m = test::block_mesh(4, 4, 1.0, 1.0);
  SolidProblem pb = fixed_block(m);
  pb.loads.body_force = Vec2(0.0, -1e-3);
  const SolidState s1 = step(pb, SolidState::zero(m.num_dofs()), 1.0);

  // linear oracle on the free dofs
  const SparseMatrix K = stiffness(m, kMat, VecX::Zero(m.num_dofs()));
  const VecX f = external_force(m, pb.loads);
  const auto& fr = pb.dofs.free_dofs();
  const Index n = static_cast<Index>(fr.size());
  Eigen::MatrixXd Kf(n, n);
  VecX ff(n);
  const Eigen::MatrixXd Kd(K);
  for (Index i = 0; i < n; ++i) {
    ff[i] = f[fr[i]];
    for (Index j = 0; j < n; ++j) Kf(i, j) = Kd(fr[i], fr[j]);
  }
  const VecX u = Kf.ldlt().solve(ff);
  VecX d_free(n);
  for (Index i = 0; i < n; ++i) d_free[i] = s1.d[fr[i]];
  EXPECT_LT((d_free - u).norm(), 0.01 * u.norm());
  EXPECT_GT(u.norm(), 0.0);
}

TEST(SolidStep, ReactionsBalanceExternalLoad) {
  const Mesh m = test::block_mesh(3, 3, 1.0, 1.0);
  SolidProblem pb = fixed_block(m);
  pb.loads.body_force = Vec2(2e-3, -1e-3);
  const SolidState s1 = step(pb, SolidState::zero(m.num_dofs()), 1.0);
  const VecX r = dirichlet_reactions(pb.dofs, internal_force(m, kMat, s1.d) - external_force(m, pb.loads));
  Vec2 sum = Vec2::Zero();
  for (Index n = 0; n < m.num_nodes(); ++n) sum += r.segment<2>(2 * n);
  EXPECT_NEAR(sum.x(), -2e-3, 1e-12);
  EXPECT_NEAR(sum.y(), 1e-3, 1e-12);
}

TEST(DofMap, FixedDofsExcludedAndApplied) {
  DofMap dm(3);
  dm.fix(1, 1, 0.25);
  dm.fix(2, 0, [](double t) { return 2.0 * t; });
  EXPECT_EQ(dm.num_free(), 4);
  EXPECT_TRUE(dm.is_fixed(3));
  EXPECT_EQ(dm.free_index(3), -1);
  VecX d = VecX::Zero(6);
  dm.apply(d, 1.5);
  EXPECT_EQ(d[3], 0.25);
  EXPECT_EQ(d[4], 3.0);
}

}  // namespace
}  // namespace ehl
