// Per-node interface residuals (Reynolds row, lubricated-contact force, NCP
// rows) with exact derivatives from forward-mode automatic differentiation.
#pragma once

#include "ehl/contact_law.hpp"
#include "ehl/lubrication.hpp"
#include "ehl/mesh.hpp"
#include "ehl/mortar.hpp"

#include <array>
#include <vector>

namespace ehl::detail {

/// Derivative directions: x,y of stencil nodes i-2..i+2 (10), p_{i-1..i+1}
/// (3), lambda_i (2).
inline constexpr int kStencil = 15;
using Grad = Eigen::Matrix<double, kStencil, 1>;

struct InterfaceStep {
  const Mesh* mesh = nullptr;
  const InterfaceMesh* iface = nullptr;
  RigidLine master;
  std::vector<bool> lubricated;  // per interface facet, frozen over the step
  std::vector<bool> p_free;      // per interface node
  std::vector<bool> contact;     // per interface node: carries a multiplier
  VecX h_prev;
  double inv_dt = 0.0;
  // slave velocity v = cv (d - d_prev) + v_off
  double cv = 0.0;
  const VecX* d_prev = nullptr;
  const VecX* v_off = nullptr;
  FluidParams fluid;
  RegularizationParams reg;
  FrictionParams friction;
  double c_n = 1.0;
  double c_t = 1.0;
  bool lubrication = true;
};

struct NodeResult {
  std::array<Index, 5> mesh_nodes;  // -1 when outside the chain
  std::array<Index, 3> p_nodes;     // interface node ids, -1 when outside
  bool has_geometry = false;        // D_i > 0

  double D = 0.0;
  double h = 0.0;
  double gap = 0.0;
  Vec2 normal = Vec2::Zero();
  double lambda_n = 0.0;
  double lambda_t = 0.0;
  double slip_velocity = 0.0;  // tangential component of (v_s - v_m)/2
  ContactStatus status = ContactStatus::Inactive;

  double rp = 0.0;
  double rp_scale = 0.0;
  Grad drp = Grad::Zero();

  Vec2 force = Vec2::Zero();  // D (t_fluid - lambda): force on the slave node
  Vec2 fluid_force = Vec2::Zero();
  Eigen::Matrix<double, 2, kStencil> dforce = Eigen::Matrix<double, 2, kStencil>::Zero();

  Vec2 ncp = Vec2::Zero();  // (C_n, C_tau)
  double ncp_tau_scale = 1.0;
  Eigen::Matrix<double, 2, kStencil> dncp = Eigen::Matrix<double, 2, kStencil>::Zero();
};

NodeResult evaluate_node(const InterfaceStep& s, const VecX& d, const VecX& p,
                         const std::vector<Vec2>& lambda, Index i);

}  // namespace ehl::detail
