#pragma once

#include "ehl/contact_law.hpp"
#include "ehl/lubrication.hpp"
#include "ehl/mesh.hpp"
#include "ehl/mortar.hpp"
#include "ehl/solid.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace ehl {

struct SolverOptions {
  double tolerance = 1e-8;
  int max_iterations = 50;
  int max_halvings = 5;
  /// Eliminate the multipliers node by node (true) or solve the full
  /// displacement-pressure-multiplier system (false).
  bool condense = true;
};

/// Deformable slave body against a rigid analytic master line, coupled
/// through the averaged Reynolds film and regularized frictional contact.
struct CoupledProblem {
  const Mesh* mesh = nullptr;
  InterfaceMesh iface;
  NeoHookeanParams material;
  SolidLoads loads;
  DofMap dofs;
  TimeIntegrator integrator;
  RegularizationParams reg;
  FrictionParams friction;
  FluidParams fluid;
  /// Master line at time t (its velocity drives the Couette flow).
  std::function<RigidLine(double t)> master = [](double) { return RigidLine{}; };
  double search_radius = 0.0;  // 0: 10 g_max
  double c_n = 0.0;            // 0: kappa
  double c_t = 0.0;            // 0: kappa * 1 s/mm
  bool lubrication = true;
  bool contact = true;
  SolverOptions solver;

  double radius() const { return search_radius > 0.0 ? search_radius : 10.0 * reg.g_max; }
  double cn() const { return c_n > 0.0 ? c_n : reg.kappa; }
  double ct() const { return c_t > 0.0 ? c_t : reg.kappa; }
  /// Validates parameters and the mesh; builds `iface` if empty.
  void prepare();
};

struct MonolithicState {
  SolidState solid;
  VecX p;                              // per interface node
  std::vector<Vec2> lambda;            // per interface node, Cartesian
  std::vector<ContactStatus> status;   // per interface node
  VecX h;                              // film thickness per interface node
  VecX F;                              // f_int - f_ext - f_lub at this state
  std::vector<bool> lubricated;        // facet set of the step that produced this state
  int step = 0;

  static MonolithicState initial(const CoupledProblem& pb);
};

/// Everything frozen over one time step: lubricated facets, pressure and
/// multiplier unknown sets, previous film, kinematic coefficients.
struct StepContext {
  double t = 0.0;   // end of step
  double dt = 0.0;
  RigidLine master;
  std::vector<bool> lubricated;
  std::vector<bool> p_free;
  std::vector<bool> contact;
  StepKinematics kin;
  const MonolithicState* prev = nullptr;

  std::vector<Index> p_index;  // interface node -> pressure unknown or -1
  std::vector<Index> l_index;  // interface node -> first multiplier unknown or -1
  Index num_p = 0;
  Index num_l = 0;
};

StepContext begin_step(const CoupledProblem& pb, const MonolithicState& prev, double dt);

/// Linearized system at an iterate. Rows/columns: free displacement dofs,
/// free pressures, multipliers (2 per contact node: normal and tangential
/// NCP rows).
struct BlockSystem {
  SparseMatrix K_dd, K_dp, K_dl;
  SparseMatrix K_pd, K_pp;
  SparseMatrix K_ld, K_lp, K_ll;
  VecX r_d, r_p, r_l;

  // normalization of the convergence test
  double scale_d = 0.0;
  double scale_p = 0.0;
  double scale_l = 0.0;
  VecX r_l_scaled;  // NCP rows scaled to pressure units

  // interface diagnostics at this iterate
  std::vector<ContactStatus> status;
  std::vector<double> lambda_n;
  VecX f_lub;  // global lubricated-contact force on the slave
  VecX f_int, f_ext;

  Index num_d() const { return r_d.size(); }
  Index num_p() const { return r_p.size(); }
  Index num_l() const { return r_l.size(); }

  /// Full square matrix [[dd dp dl] [pd pp 0] [ld lp ll]].
  SparseMatrix full_matrix() const;
  VecX full_residual() const;
};

/// Iterate (d, p, lambda) at the end of the step.
struct Iterate {
  VecX d;
  VecX p;
  std::vector<Vec2> lambda;
};

BlockSystem assemble(const CoupledProblem& pb, const StepContext& ctx, const Iterate& it);

/// Displacement/pressure system after eliminating the multipliers, plus what
/// is needed to recover the multiplier increment.
struct ReducedSystem {
  SparseMatrix A;
  VecX b;
  // delta_lambda = rec_c - rec_A * (delta_d, delta_p)
  SparseMatrix rec_A;
  VecX rec_c;
};

/// Requires every contact node to have both displacement dofs free (true by
/// construction of StepContext). Throws StepFailure on a zero weight.
ReducedSystem condense_contact(const BlockSystem& sys, const StepContext& ctx,
                               const CoupledProblem& pb);

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residuals;  // max normalized block residual per iteration
  bool converged = false;
};

/// Semi-smooth Newton on one step from `prev` with the given dt. Throws
/// StepFailure (iteration limit, singular system, inverted element, film
/// violation).
MonolithicState semismooth_newton(const CoupledProblem& pb, const MonolithicState& prev,
                                  double dt, NewtonReport* report = nullptr);

/// One step of size dt, halving up to max_halvings times on failure.
/// Sub-steps are taken until the full dt is covered.
MonolithicState advance(const CoupledProblem& pb, const MonolithicState& prev, double dt,
                        NewtonReport* report = nullptr);

/// Post-processed interface quantities of a converged state.
struct InterfaceSnapshot {
  std::vector<Vec2> x;
  VecX p, h, lambda_n, gap;
  std::vector<bool> in_film;     // per node: weighted gap and film thickness defined
  std::vector<bool> lubricated;  // per facet
  Vec2 slave_force = Vec2::Zero();  // total lubricated-contact force on the slave
  Vec2 fluid_force = Vec2::Zero();
  Vec2 contact_force = Vec2::Zero();
};

InterfaceSnapshot snapshot(const CoupledProblem& pb, const MonolithicState& s);

/// Sum of Dirichlet reactions (residual on constrained dofs) over the nodes
/// of boundary set `set`.
Vec2 reaction(const CoupledProblem& pb, const MonolithicState& s, BoundarySet set);

}  // namespace ehl
