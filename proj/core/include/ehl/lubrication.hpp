#pragma once

#include "ehl/types.hpp"

#include <vector>

namespace ehl {

struct FluidParams {
  double eta = 4e-8;          // MPa s
  double density = 0.0;       // t/mm^3; constant, so it divides out of the Reynolds equation
  double penalty_eps = 1e8;   // s/mm
  double sigma = 1e-3;        // mm, roughness std entering the flow factors

  /// Throws DomainError unless eta > 0, penalty_eps > 0, sigma >= 0.
  void validate() const;
};

/// Patir-Cheng pressure, shear and shear-stress flow factors for isotropic
/// Gaussian roughness.
struct FlowFactors {
  double phi_p = 1.0;
  double phi_s = 0.0;
  double phi_f = 1.0;
};

/// Throws DomainError for h <= 0.
FlowFactors flow_factors(double h, double sigma);

/// Interface geometry in the current configuration. Facet i joins nodes i
/// and i+1; only facets flagged lubricated carry fluid.
struct InterfaceGeometry {
  std::vector<Vec2> x;
  std::vector<Vec2> normal;  // nodal normals, used for the pressure traction
  std::vector<bool> lubricated;

  Index num_nodes() const { return static_cast<Index>(x.size()); }
  /// int N_k over lubricated facets.
  VecX nodal_weights() const;
};

/// Nodal lubrication state. Velocities are the weighted tangential surface
/// velocities of the slave (v_slave) and master (v_master) surfaces.
struct LubricationField {
  VecX p;
  VecX h;
  VecX h_prev;
  std::vector<Vec2> v_slave;
  std::vector<Vec2> v_master;
};

/// The five weak-form terms of the averaged Reynolds equation, per node.
struct ReynoldsTerms {
  VecX poiseuille, squeeze, couette, shear, cavitation;
};

/// Residual r_p = poiseuille + squeeze + couette + shear + cavitation with
///   poiseuille  =  int h^3/(12 eta) Phi_p grad p . grad N
///   squeeze     =  int (h - h_prev)/dt N           (dropped when dt <= 0)
///   couette     = -int (v_s + v_m)/2 h . grad N
///   shear       = -int (v_s - v_m)/2 sigma Phi_s . grad N
///   cavitation  = -eps <-p> int N                   (nodally lumped)
/// Facet integrals use 5-point Gauss. Throws ModelViolation if h <= 0.
VecX reynolds_residual(const InterfaceGeometry& geo, const LubricationField& field,
                       const FluidParams& fluid, double dt, ReynoldsTerms* terms = nullptr);

/// Classical smooth-surface Reynolds residual (no flow factors, no shear
/// term), coded separately as a regression reference.
VecX classical_reynolds_residual(const InterfaceGeometry& geo, const LubricationField& field,
                                 double eta, double penalty_eps, double dt);

/// -eps <-p_k> w_k for nodal weights w.
VecX cavitation_term(const VecX& p, const VecX& weights, double penalty_eps);

struct FluidTraction {
  Vec2 parallel = Vec2::Zero();     // Poiseuille shear, -(h/2) Phi_p grad p
  Vec2 nonparallel = Vec2::Zero();  // -p n - (eta/h) (v_s - v_m)/2 (Phi_f + Phi_s)
};

/// Slave-side fluid traction at node k; grad_p from smooth_nodal_traction_gradient.
/// Throws ModelViolation if h_k <= 0.
FluidTraction fluid_traction(const InterfaceGeometry& geo, const LubricationField& field,
                             const FluidParams& fluid, const std::vector<Vec2>& grad_p, Index k);

struct ReynoldsSolveOptions {
  double dt = 0.0;  // <= 0: steady
  int max_iterations = 50;
  double tolerance = 1e-12;  // on the pressure increment, relative
};

struct ReynoldsSolveResult {
  VecX p;
  int iterations = 0;
};

/// Solves r_p(p) = 0 for fixed film and velocities with a semi-smooth Newton
/// iteration on the cavitation kink. Nodes with fixed[k] keep field.p[k].
/// Throws StepFailure if the iteration does not settle.
ReynoldsSolveResult solve_reynolds(const InterfaceGeometry& geo, const LubricationField& field,
                                   const FluidParams& fluid, const std::vector<bool>& fixed,
                                   const ReynoldsSolveOptions& opts = {});

}  // namespace ehl
