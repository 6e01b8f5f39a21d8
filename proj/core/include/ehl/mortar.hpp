#pragma once

#include "ehl/mesh.hpp"
#include "ehl/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace ehl {

/// Dual (biorthogonal) basis on one 2-node slave facet:
/// phi_i = sum_j coeffs(i, j) N_j, with int phi_i N_j = delta_ij int N_j.
struct DualBasis {
  Mat2 coeffs = Mat2::Identity();

  std::array<double, 2> eval(double xi) const;
};

/// Solves the local biorthogonality system on the deformed facet x0 -> x1.
/// Throws SingularGeometry for a collapsed facet.
DualBasis dual_coeffs(const Vec2& x0, const Vec2& x1);
DualBasis dual_coeffs(const Mesh& mesh, Index facet, const VecX& d);

/// Rigid, straight master surface: the line through `point` with unit normal
/// `normal` pointing out of the master body (towards the slave). Tangential
/// motion leaves the line unchanged, so only its velocity is stored.
struct RigidLine {
  Vec2 point = Vec2::Zero();
  Vec2 normal = Vec2(0.0, 1.0);
  Vec2 velocity = Vec2::Zero();
};

/// Deformable master surface as a polyline in the current configuration.
struct MasterPolyline {
  std::vector<Index> mesh_nodes;               // mesh node id per polyline node
  std::vector<Vec2> x;                         // current positions
  std::vector<std::array<Index, 2>> segments;  // polyline node pairs, master body on the left

  Index num_nodes() const { return static_cast<Index>(x.size()); }
  /// Master facets of `mesh` at displacement d.
  static MasterPolyline from_mesh(const Mesh& mesh, const VecX& d);
};

struct Projection {
  Index facet = -1;  // master segment id, -1 for a rigid line
  double xi = 0.0;   // parametric coordinate on [-1, 1] (rigid line: 0)
  double s = 0.0;    // signed distance along the slave normal; the gap
  Vec2 point = Vec2::Zero();
};

/// Intersects the ray x + s n with the master surface. Only hits where the
/// surfaces face each other and |s| <= search_radius count.
std::optional<Projection> project_to_master(const Vec2& x, const Vec2& n, const RigidLine& master,
                                            double search_radius);
std::optional<Projection> project_to_master(const Vec2& x, const Vec2& n,
                                            const MasterPolyline& master, double search_radius);

struct MortarMatrices {
  VecX D;          // diagonal, per interface node
  SparseMatrix M;  // interface nodes x master polyline nodes
  /// Per slave facet, the projections of the segment quadrature points.
  std::vector<std::vector<Projection>> projections;
};

/// Segment-based mortar integration: every slave facet is cut at the
/// (facet-normal) images of the master nodes and each piece is integrated
/// with `n_gauss` points. D uses the full slave facet.
MortarMatrices assemble_mortar(const Mesh& mesh, const InterfaceMesh& iface,
                               const MasterPolyline& master, const VecX& d, double search_radius,
                               int n_gauss = 3);

/// Slave and master nodal forces of a piecewise-dual interpolated traction
/// field t_h = sum_k phi_k t_k: f_slave = D t, f_master = -M^T t.
struct InterfaceForces {
  std::vector<Vec2> slave;
  std::vector<Vec2> master;
};
InterfaceForces transmit_traction(const MortarMatrices& mm, const std::vector<Vec2>& traction);

// ---------------------------------------------------------------------------
// Nodal interface quantities against a rigid master.

/// Facets whose quadrature points all project onto the master within range.
std::vector<bool> lubricated_facets(const Mesh& mesh, const InterfaceMesh& iface, const VecX& d,
                                    const RigidLine& master, double search_radius);

struct InterfaceKinematics {
  VecX D;                       // int N_k over lubricated facets
  VecX gap;                     // weighted gap, 0 where D = 0
  std::vector<Vec2> normal;     // averaged nodal normal
  std::vector<Vec2> v_slave;    // weighted tangential slave velocity
  std::vector<Vec2> v_master;   // weighted tangential master velocity
};

InterfaceKinematics interface_kinematics(const Mesh& mesh, const InterfaceMesh& iface,
                                         const VecX& d, const VecX& v, const RigidLine& master,
                                         const std::vector<bool>& lubricated);

/// Weighted gap at interface node k; nullopt if the node has no lubricated facet.
std::optional<double> weighted_gap(const Mesh& mesh, const InterfaceMesh& iface, Index k,
                                   const VecX& d, const RigidLine& master,
                                   const std::vector<bool>& lubricated);
/// Weighted relative tangential velocity (v_slave - v_master) / 2 at node k.
std::optional<Vec2> weighted_rel_velocity(const Mesh& mesh, const InterfaceMesh& iface, Index k,
                                          const VecX& d, const VecX& v, const RigidLine& master,
                                          const std::vector<bool>& lubricated);

/// Continuous nodal surface gradient of a pressure field on the interface:
/// per-facet gradients averaged with the dual weights int phi_k.
std::vector<Vec2> smooth_nodal_traction_gradient(const std::vector<Vec2>& positions,
                                                 const VecX& pressure,
                                                 const std::vector<bool>& lubricated);

/// Current positions of the interface nodes.
std::vector<Vec2> interface_positions(const Mesh& mesh, const InterfaceMesh& iface, const VecX& d);

}  // namespace ehl
