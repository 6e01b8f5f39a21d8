#include "interface.hpp"

#include "kernels.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <cmath>
#include <optional>

namespace ehl::detail {

namespace {

using AD = Eigen::AutoDiffScalar<Grad>;
using V = kernel::V2<AD>;

AD variable(double value, int dir) { return AD(value, kStencil, dir); }
AD constant(double value) { return AD(value, Grad::Zero()); }

}  // namespace

NodeResult evaluate_node(const InterfaceStep& s, const VecX& d, const VecX& p,
                         const std::vector<Vec2>& lambda, Index i) {
  const Mesh& mesh = *s.mesh;
  const InterfaceMesh& iface = *s.iface;
  const Index n = iface.num_nodes();
  NodeResult out;

  // Stencil positions and velocities.
  std::array<std::optional<V>, 5> x;
  std::array<std::optional<V>, 5> v;
  for (int o = 0; o < 5; ++o) {
    const Index j = i + o - 2;
    out.mesh_nodes[o] = (j >= 0 && j < n) ? iface.nodes[j] : -1;
    if (out.mesh_nodes[o] < 0) continue;
    const Index m = out.mesh_nodes[o];
    const V xj(variable(mesh.nodes[m].x() + d[kDim * m], 2 * o),
               variable(mesh.nodes[m].y() + d[kDim * m + 1], 2 * o + 1));
    x[o] = xj;
    V vj;
    for (int c = 0; c < 2; ++c) {
      const Index dof = kDim * m + c;
      vj[c] = s.cv * (xj[c] - mesh.nodes[m][c] - (*s.d_prev)[dof]) + (*s.v_off)[dof];
    }
    v[o] = vj;
  }
  std::array<AD, 3> pp;
  for (int o = 0; o < 3; ++o) {
    const Index j = i + o - 1;
    out.p_nodes[o] = (j >= 0 && j < n) ? j : -1;
    pp[o] = out.p_nodes[o] >= 0 ? variable(p[j], 10 + o) : constant(0.0);
  }
  const V lam(variable(lambda[i].x(), 13), variable(lambda[i].y(), 14));

  auto facet_ok = [&](Index e) { return e >= 0 && e < n - 1 && s.lubricated[e]; };

  // Node geometry for j = i-1, i, i+1 (local offsets 1..3).
  struct Geo {
    kernel::NodeGeometry<AD> g;
    AD h;
    V vs, vm;
    bool valid = false;
  };
  std::array<Geo, 3> geo;
  for (int o = 1; o <= 3; ++o) {
    const Index j = i + o - 2;
    if (!x[o]) continue;
    const V* left = facet_ok(j - 1) ? &*x[o - 1] : nullptr;
    const V* right = facet_ok(j) ? &*x[o + 1] : nullptr;
    Geo& G = geo[o - 1];
    G.g = kernel::node_geometry<AD>(left, *x[o], right, s.master);
    if (!(G.g.D > 0.0)) continue;
    G.valid = true;
    G.h = s.reg.film(G.g.gap);
    G.vs = kernel::tangential<AD>(*v[o], G.g.t);
    G.vm = kernel::tangential<AD>(kernel::lift<AD>(s.master.velocity), G.g.t);
  }
  const Geo& me = geo[1];
  if (!me.valid) return out;
  out.has_geometry = true;
  out.D = me.g.D.value();
  out.h = me.h.value();
  out.gap = me.g.gap.value();
  out.normal = Vec2(me.g.n.x().value(), me.g.n.y().value());
  if (!(out.h > 0.0)) throw ModelViolation("non-positive film thickness at interface node " +
                                           std::to_string(i));

  // Reynolds row.
  if (s.lubrication && s.p_free[i]) {
    AD r = constant(0.0);
    double scale = 0.0;
    for (int side = 0; side < 2; ++side) {
      const Index e = i - 1 + side;  // facet joining chain nodes e, e+1
      if (!facet_ok(e)) continue;
      kernel::ReynoldsFacet<AD> rf;
      for (int a = 0; a < 2; ++a) {
        const int g = side + a;  // index into geo / pp
        rf.x[a] = *x[g + 1];
        rf.p[a] = pp[g];
        rf.h[a] = geo[g].h;
        rf.h_prev[a] = s.h_prev[i - 1 + g];
        rf.v_sum[a] = 0.5 * (geo[g].vs + geo[g].vm);
        rf.v_diff[a] = 0.5 * (geo[g].vs - geo[g].vm);
      }
      AD acc[2] = {constant(0.0), constant(0.0)};
      double parts[4][2] = {{0, 0}, {0, 0}, {0, 0}, {0, 0}};
      kernel::reynolds_facet(rf, s.fluid, s.inv_dt, acc, parts);
      const int a = 1 - side;  // local index of node i on this facet
      r += acc[a];
      for (int t = 0; t < 4; ++t) scale += std::abs(parts[t][a]);
    }
    if (pp[1] < 0.0) {
      const AD cav = s.fluid.penalty_eps * pp[1] * me.g.D;
      r += cav;
      scale += std::abs(cav.value());
    }
    out.rp = r.value();
    out.drp = r.derivatives();
    out.rp_scale = scale;
  }

  // Smoothed pressure gradient and fluid traction at node i.
  V t_fluid = V(constant(0.0), constant(0.0));
  if (s.lubrication) {
    V grad = V(constant(0.0), constant(0.0));
    for (int side = 0; side < 2; ++side) {
      const Index e = i - 1 + side;
      if (!facet_ok(e)) continue;
      const auto fr = kernel::facet_frame<AD>(*x[side + 1], *x[side + 2]);
      grad += (0.5 * (pp[side + 1] - pp[side])) * fr.t;
    }
    grad /= me.g.D;
    t_fluid = kernel::fluid_traction_total<AD>(pp[1], me.h, me.g.n, grad, V(0.5 * (me.vs - me.vm)),
                                               s.fluid);
  }
  const V fluid_force = me.g.D * t_fluid;
  const V f = me.g.D * (t_fluid - lam);
  out.fluid_force = Vec2(fluid_force.x().value(), fluid_force.y().value());
  for (int c = 0; c < 2; ++c) {
    out.force[c] = f[c].value();
    out.dforce.row(c) = f[c].derivatives().transpose();
  }

  // Contact complementarity.
  const AD ln = kernel::dot2<AD>(lam, me.g.n);
  const AD lt = kernel::dot2<AD>(lam, me.g.t);
  const AD vt = kernel::dot2<AD>(V(0.5 * (me.vs - me.vm)), me.g.t);
  out.lambda_n = ln.value();
  out.lambda_t = lt.value();
  out.slip_velocity = vt.value();
  if (s.contact[i]) {
    const AD cn = law::ncp_normal(ln, me.g.gap, s.reg, s.c_n);
    const bool active = ln.value() - s.c_n * (me.g.gap.value() + law::regularized_gap(ln.value(), s.reg)) > 0.0;
    AD ct = lt;
    out.ncp_tau_scale = 1.0;
    // Without a positive normal multiplier the friction bound is zero and
    // the full law degenerates to a zero row; enforce lambda_t = 0 instead.
    if (active && s.friction.mu > 0.0 && ln.value() > 0.0) {
      ct = law::ncp_tangential(lt, ln, vt, s.friction.mu, s.c_t);
      const double z = std::abs(lt.value() + s.c_t * vt.value());
      out.ncp_tau_scale = std::max({s.friction.mu * ln.value(), z, 1e-300});
      out.status = s.friction.mu * ln.value() >= z ? ContactStatus::Stick : ContactStatus::Slip;
    } else if (active) {
      out.status = ContactStatus::Slip;
    }
    out.ncp = Vec2(cn.value(), ct.value());
    out.dncp.row(0) = cn.derivatives().transpose();
    out.dncp.row(1) = ct.derivatives().transpose();
  }
  return out;
}

}  // namespace ehl::detail
