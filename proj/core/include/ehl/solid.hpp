#pragma once

#include "ehl/material.hpp"
#include "ehl/mesh.hpp"
#include "ehl/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace ehl {

/// Node -> displacement dof numbering (dof = 2 * node + component) plus the
/// Dirichlet mask. Constrained dofs are dropped from every solved system.
class DofMap {
 public:
  using ValueFn = std::function<double(double t)>;

  DofMap() = default;
  explicit DofMap(Index num_nodes);

  Index num_dofs() const { return static_cast<Index>(fixed_.size()); }
  Index num_free() const { return static_cast<Index>(free_.size()); }

  /// Prescribes component `comp` of `node`. Re-fixing replaces the value function.
  void fix(Index node, int comp, ValueFn value);
  void fix(Index node, int comp, double value);
  /// Fixes every node touched by facets of `set`.
  void fix_set(const Mesh& mesh, BoundarySet set, int comp, const ValueFn& value);

  bool is_fixed(Index dof) const { return fixed_[dof] >= 0; }
  /// Position of `dof` in the free-dof vector, -1 when constrained.
  Index free_index(Index dof) const { return free_pos_[dof]; }
  const std::vector<Index>& free_dofs() const { return free_; }
  std::vector<Index> fixed_dofs() const;

  /// Writes the prescribed values at time t into d.
  void apply(VecX& d, double t) const;

 private:
  void rebuild();

  std::vector<Index> fixed_;  // index into values_ or -1
  std::vector<ValueFn> values_;
  std::vector<Index> free_;
  std::vector<Index> free_pos_;
};

/// Bulk loading: a uniform body force per reference volume (N/mm^3) and a
/// uniform traction on every neumann facet (MPa, reference configuration).
struct SolidLoads {
  Vec2 body_force = Vec2::Zero();
  Vec2 neumann_traction = Vec2::Zero();
};

/// Assembles f_int(d) and, if requested, K(d) = df_int/dd over all quads
/// with 2x2 Gauss quadrature. Throws InvertedElement carrying the element id.
void assemble_internal(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d,
                       VecX* f_int, std::vector<Triplet>* k_triplets);

VecX internal_force(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d);
SparseMatrix stiffness(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d);
double total_strain_energy(const Mesh& mesh, const NeoHookeanParams& mat, const VecX& d);

/// Consistent mass matrix, rho * int N_a N_b.
SparseMatrix mass_matrix(const Mesh& mesh, double density);
VecX external_force(const Mesh& mesh, const SolidLoads& loads);

// ---------------------------------------------------------------------------
// Time integration

enum class TimeScheme { QuasiStatic, GeneralizedAlpha };

struct GeneralizedAlphaCoefficients {
  double alpha_m, alpha_f, beta, gamma;
  /// Chung-Hulbert parameters for spectral radius rho_inf in [0, 1].
  static GeneralizedAlphaCoefficients from_spectral_radius(double rho_inf);
};

struct TimeIntegrator {
  TimeScheme scheme = TimeScheme::QuasiStatic;
  double rho_inf = 0.9;

  GeneralizedAlphaCoefficients coefficients() const {
    return GeneralizedAlphaCoefficients::from_spectral_radius(rho_inf);
  }
};

struct SolidState {
  VecX d, v, a;
  double t = 0.0;

  static SolidState zero(Index num_dofs);
};

/// Affine dependence of the end-of-step velocity and acceleration on the
/// unknown end-of-step displacement: v = cv (d - d_n) + v_off, same for a.
/// The residual reads r = w_m M a_mid + w_f F(d) + (1 - w_f) F_n with
/// a_mid = (1 - alpha_m) a + alpha_m a_n.
struct StepKinematics {
  double cv = 0.0;
  double ca = 0.0;
  VecX v_off, a_off;
  double w_inertia = 0.0;  // (1 - alpha_m) for the a-part, 0 when quasi-static
  double alpha_m = 0.0;
  double w_force = 1.0;  // 1 - alpha_f

  VecX velocity(const VecX& d, const VecX& d_prev) const { return cv * (d - d_prev) + v_off; }
  VecX acceleration(const VecX& d, const VecX& d_prev) const { return ca * (d - d_prev) + a_off; }
};

StepKinematics step_kinematics(const TimeIntegrator& ti, const SolidState& prev, double dt);

struct NewtonOptions {
  int max_iterations = 50;
  double tolerance = 1e-8;  // on the scaled residual and increment
};

struct SolidProblem {
  const Mesh* mesh = nullptr;
  NeoHookeanParams material;
  SolidLoads loads;
  DofMap dofs;
  TimeIntegrator integrator;
};

/// Advances the bulk solid alone by one step to t_n + dt. `extra_force`
/// (optional) is an additional deformation-independent force at t_{n+1}.
/// Throws StepFailure if Newton does not converge.
SolidState step(const SolidProblem& problem, const SolidState& prev, double dt,
                const VecX* extra_force = nullptr, const NewtonOptions& opts = {});

/// Residual entries on the constrained dofs: the Dirichlet reactions.
VecX dirichlet_reactions(const DofMap& dofs, const VecX& residual);

}  // namespace ehl
