#include "ehl/solid.hpp"

#include "ehl/errors.hpp"
#include "ehl/fe.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace ehl {

DofMap::DofMap(Index num_nodes)
    : fixed_(static_cast<std::size_t>(kDim * num_nodes), -1) {
  rebuild();
}

void DofMap::fix(Index node, int comp, ValueFn value) {
  const Index dof = kDim * node + comp;
  if (node < 0 || dof >= num_dofs() || comp < 0 || comp >= kDim)
    throw InvalidGeometry("DofMap::fix: dof out of range");
  if (fixed_[dof] >= 0) {
    values_[fixed_[dof]] = std::move(value);
    return;
  }
  fixed_[dof] = static_cast<Index>(values_.size());
  values_.push_back(std::move(value));
  rebuild();
}

void DofMap::fix(Index node, int comp, double value) {
  fix(node, comp, [value](double) { return value; });
}

void DofMap::fix_set(const Mesh& mesh, BoundarySet set, int comp, const ValueFn& value) {
  for (Index n : mesh.nodes_in(set)) fix(n, comp, value);
}

std::vector<Index> DofMap::fixed_dofs() const {
  std::vector<Index> out;
  for (Index i = 0; i < num_dofs(); ++i)
    if (fixed_[i] >= 0) out.push_back(i);
  return out;
}

void DofMap::apply(VecX& d, double t) const {
  for (Index i = 0; i < num_dofs(); ++i)
    if (fixed_[i] >= 0) d[i] = values_[fixed_[i]](t);
}

void DofMap::rebuild() {
  free_.clear();
  free_pos_.assign(fixed_.size(), -1);
  for (Index i = 0; i < num_dofs(); ++i)
    if (fixed_[i] < 0) {
      free_pos_[i] = static_cast<Index>(free_.size());
      free_.push_back(i);
    }
}

// ---------------------------------------------------------------------------

namespace {

struct ElementKinematics {
  Eigen::Matrix<double, 2, 4> dNdX;
  Mat2 F;
  double w;  // quadrature weight * det J
};

ElementKinematics kinematics_at(const Mesh& mesh, const Quad& q, const VecX& d,
                                const fe::GaussPoint2D& gp, Index e) {
  Eigen::Matrix<double, 2, 4> X, u;
  for (int a = 0; a < 4; ++a) {
    X.col(a) = mesh.nodes[q.nodes[a]];
    u.col(a) = d.segment<2>(kDim * q.nodes[a]);
  }
  const auto dN = fe::quad_shape_deriv(gp.xi, gp.eta);
  const Mat2 J = dN * X.transpose();  // J(i, j) = dX_j / dxi_i
  const double detJ = J.determinant();
  if (!(detJ > 0.0))
    throw InvertedElement("non-positive reference Jacobian in element " + std::to_string(e), e);
  ElementKinematics k;
  k.dNdX = J.inverse() * dN;
  k.F = Mat2::Identity() + u * k.dNdX.transpose();
  k.w = gp.weight * detJ;
  return k;
}

}  // namespace

void assemble_internal(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d,
                       VecX* f_int, std::vector<Triplet>* k_triplets) {
  if (f_int) f_int->setZero(mesh.num_dofs());
  if (k_triplets) k_triplets->reserve(k_triplets->size() + 64 * mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Quad& q = mesh.elements[e];
    Eigen::Matrix<double, 8, 1> fe = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
    for (const auto& gp : fe::gauss_quad_2x2()) {
      const ElementKinematics k = kinematics_at(mesh, q, d, gp, e);
      Mat2 S;
      Mat3 C;
      try {
        S = pk2_stress(k.F, mat);
        if (k_triplets) C = material_tangent(k.F, mat);
      } catch (const InvertedElement&) {
        throw InvertedElement("det F <= 0 in element " + std::to_string(e), e);
      }
      Eigen::Matrix<double, 3, 8> B;
      for (int a = 0; a < 4; ++a) {
        const double n1 = k.dNdX(0, a), n2 = k.dNdX(1, a);
        for (int i = 0; i < 2; ++i) {
          B(0, 2 * a + i) = k.F(i, 0) * n1;
          B(1, 2 * a + i) = k.F(i, 1) * n2;
          B(2, 2 * a + i) = k.F(i, 0) * n2 + k.F(i, 1) * n1;
        }
      }
      const Vec3 Sv(S(0, 0), S(1, 1), S(0, 1));
      fe.noalias() += k.w * B.transpose() * Sv;
      if (k_triplets) {
        ke.noalias() += k.w * B.transpose() * C * B;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double g = k.w * k.dNdX.col(a).dot(S * k.dNdX.col(b));
            ke(2 * a, 2 * b) += g;
            ke(2 * a + 1, 2 * b + 1) += g;
          }
      }
    }
    for (int a = 0; a < 4; ++a) {
      const Index ga = kDim * q.nodes[a];
      if (f_int) f_int->segment<2>(ga) += fe.segment<2>(2 * a);
      if (k_triplets)
        for (int b = 0; b < 4; ++b) {
          const Index gb = kDim * q.nodes[b];
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
              k_triplets->emplace_back(ga + i, gb + j, ke(2 * a + i, 2 * b + j));
        }
    }
  }
}

VecX internal_force(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d) {
  VecX f;
  assemble_internal(mesh, mat, d, &f, nullptr);
  return f;
}

SparseMatrix stiffness(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d) {
  std::vector<Triplet> t;
  assemble_internal(mesh, mat, d, nullptr, &t);
  SparseMatrix K(mesh.num_dofs(), mesh.num_dofs());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

double total_strain_energy(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d) {
  double w = 0.0;
  for (Index e = 0; e < mesh.num_elements(); ++e)
    for (const auto& gp : fe::gauss_quad_2x2()) {
      const ElementKinematics k = kinematics_at(mesh, mesh.elements[e], d, gp, e);
      w += k.w * strain_energy(k.F, mat);
    }
  return w;
}

SparseMatrix mass_matrix(const Mesh& mesh, double density) {
  std::vector<Triplet> t;
  t.reserve(32 * mesh.num_elements());
  const VecX zero = VecX::Zero(mesh.num_dofs());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const Quad& q = mesh.elements[e];
    Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
    for (const auto& gp : fe::gauss_quad_2x2()) {
      const ElementKinematics k = kinematics_at(mesh, q, zero, gp, e);
      const auto N = fe::quad_shape(gp.xi, gp.eta);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) me(a, b) += density * k.w * N[a] * N[b];
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int i = 0; i < 2; ++i)
          t.emplace_back(kDim * q.nodes[a] + i, kDim * q.nodes[b] + i, me(a, b));
  }
  SparseMatrix M(mesh.num_dofs(), mesh.num_dofs());
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

VecX external_force(const Mesh& mesh, const SolidLoads& loads) {
  VecX f = VecX::Zero(mesh.num_dofs());
  if (loads.body_force.squaredNorm() > 0.0) {
    const VecX zero = VecX::Zero(mesh.num_dofs());
    for (Index e = 0; e < mesh.num_elements(); ++e) {
      const Quad& q = mesh.elements[e];
      for (const auto& gp : fe::gauss_quad_2x2()) {
        const ElementKinematics k = kinematics_at(mesh, q, zero, gp, e);
        const auto N = fe::quad_shape(gp.xi, gp.eta);
        for (int a = 0; a < 4; ++a) f.segment<2>(kDim * q.nodes[a]) += k.w * N[a] * loads.body_force;
      }
    }
  }
  if (loads.neumann_traction.squaredNorm() > 0.0) {
    for (const Facet& fc : mesh.facets) {
      if (fc.set != BoundarySet::Neumann) continue;
      const double len = (mesh.nodes[fc.nodes[1]] - mesh.nodes[fc.nodes[0]]).norm();
      for (Index n : fc.nodes) f.segment<2>(kDim * n) += 0.5 * len * loads.neumann_traction;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

GeneralizedAlphaCoefficients GeneralizedAlphaCoefficients::from_spectral_radius(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("spectral radius must lie in [0, 1]");
  GeneralizedAlphaCoefficients c;
  c.alpha_m = (2.0 * rho - 1.0) / (rho + 1.0);
  c.alpha_f = rho / (rho + 1.0);
  c.gamma = 0.5 - c.alpha_m + c.alpha_f;
  c.beta = 0.25 * (1.0 - c.alpha_m + c.alpha_f) * (1.0 - c.alpha_m + c.alpha_f);
  return c;
}

SolidState SolidState::zero(Index n) {
  return {VecX::Zero(n), VecX::Zero(n), VecX::Zero(n), 0.0};
}

StepKinematics step_kinematics(const TimeIntegrator& ti, const SolidState& prev, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  StepKinematics k;
  if (ti.scheme == TimeScheme::QuasiStatic) {
    k.cv = 1.0 / dt;
    k.ca = 0.0;
    k.v_off = VecX::Zero(prev.d.size());
    k.a_off = VecX::Zero(prev.d.size());
    k.w_inertia = 0.0;
    k.alpha_m = 0.0;
    k.w_force = 1.0;
    return k;
  }
  const auto c = ti.coefficients();
  k.ca = 1.0 / (c.beta * dt * dt);
  k.a_off = -prev.v / (c.beta * dt) - (0.5 / c.beta - 1.0) * prev.a;
  k.cv = c.gamma / (c.beta * dt);
  k.v_off = prev.v + dt * (1.0 - c.gamma) * prev.a + dt * c.gamma * k.a_off;
  k.w_inertia = 1.0 - c.alpha_m;
  k.alpha_m = c.alpha_m;
  k.w_force = 1.0 - c.alpha_f;
  return k;
}

VecX dirichlet_reactions(const DofMap& dofs, const VecX& residual) {
  VecX r = VecX::Zero(residual.size());
  for (Index i : dofs.fixed_dofs()) r[i] = residual[i];
  return r;
}

SolidState step(const SolidProblem& pb, const SolidState& prev, double dt, const VecX* extra,
                const NewtonOptions& opts) {
  const Mesh& mesh = *pb.mesh;
  const Index n = mesh.num_dofs();
  const StepKinematics kin = step_kinematics(pb.integrator, prev, dt);
  const bool dynamic = pb.integrator.scheme == TimeScheme::GeneralizedAlpha;
  const SparseMatrix M = dynamic ? mass_matrix(mesh, pb.material.density) : SparseMatrix(n, n);

  VecX f_ext = external_force(mesh, pb.loads);
  if (extra) f_ext += *extra;
  VecX F_prev = VecX::Zero(n);
  if (kin.w_force < 1.0) F_prev = internal_force(mesh, pb.material, prev.d) - f_ext;

  SolidState next = prev;
  next.t = prev.t + dt;
  pb.dofs.apply(next.d, next.t);

  const auto& free = pb.dofs.free_dofs();
  const Index nf = pb.dofs.num_free();
  Eigen::SparseLU<SparseMatrix> lu;
  for (int it = 0; it < opts.max_iterations; ++it) {
    VecX f_int;
    std::vector<Triplet> kt;
    assemble_internal(mesh, pb.material, next.d, &f_int, &kt);
    VecX r = kin.w_force * (f_int - f_ext) + (1.0 - kin.w_force) * F_prev;
    double scale = std::max(f_int.lpNorm<Eigen::Infinity>(), f_ext.lpNorm<Eigen::Infinity>());
    if (dynamic) {
      const VecX a = kin.acceleration(next.d, prev.d);
      const VecX inertia = M * (kin.w_inertia * a + kin.alpha_m * prev.a);
      r += inertia;
      scale = std::max(scale, inertia.lpNorm<Eigen::Infinity>());
    }
    VecX rf(nf);
    for (Index i = 0; i < nf; ++i) rf[i] = r[free[i]];
    if (rf.lpNorm<Eigen::Infinity>() <= opts.tolerance * std::max(scale, 1e-300)) {
      next.v = kin.velocity(next.d, prev.d);
      next.a = kin.acceleration(next.d, prev.d);
      return next;
    }
    std::vector<Triplet> kf;
    kf.reserve(kt.size());
    for (const auto& t : kt) {
      const Index i = pb.dofs.free_index(t.row()), j = pb.dofs.free_index(t.col());
      if (i >= 0 && j >= 0) kf.emplace_back(i, j, kin.w_force * t.value());
    }
    if (dynamic)
      for (int c = 0; c < M.outerSize(); ++c)
        for (SparseMatrix::InnerIterator itm(M, c); itm; ++itm) {
          const Index i = pb.dofs.free_index(itm.row()), j = pb.dofs.free_index(itm.col());
          if (i >= 0 && j >= 0) kf.emplace_back(i, j, kin.w_inertia * kin.ca * itm.value());
        }
    SparseMatrix Kf(nf, nf);
    Kf.setFromTriplets(kf.begin(), kf.end());
    if (it == 0) lu.analyzePattern(Kf);
    lu.factorize(Kf);
    if (lu.info() != Eigen::Success) throw StepFailure("singular solid tangent");
    const VecX dx = lu.solve(-rf);
    for (Index i = 0; i < nf; ++i) next.d[free[i]] += dx[i];
  }
  throw StepFailure("solid Newton did not converge in " + std::to_string(opts.max_iterations) +
                    " iterations");
}

}  // namespace ehl
