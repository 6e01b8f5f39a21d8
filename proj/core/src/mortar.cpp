#include "ehl/mortar.hpp"

#include "ehl/errors.hpp"
#include "ehl/fe.hpp"
#include "kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace ehl {

std::array<double, 2> DualBasis::eval(double xi) const {
  const auto N = fe::line_shape(xi);
  return {coeffs(0, 0) * N[0] + coeffs(0, 1) * N[1], coeffs(1, 0) * N[0] + coeffs(1, 1) * N[1]};
}

DualBasis dual_coeffs(const Vec2& x0, const Vec2& x1) {
  const double len = (x1 - x0).norm();
  // Straight facet: constant metric len / 2. A general (curved) facet would
  // carry the metric inside the integrals below.
  Mat2 me = Mat2::Zero();
  Mat2 de = Mat2::Zero();
  for (const auto& gp : fe::gauss_line(3)) {
    const auto N = fe::line_shape(gp.xi);
    const double w = gp.weight * 0.5 * len;
    for (int i = 0; i < 2; ++i) {
      de(i, i) += w * N[i];
      for (int j = 0; j < 2; ++j) me(i, j) += w * N[i] * N[j];
    }
  }
  const double det = me.determinant();
  if (!(len > 0.0) || !(std::abs(det) > 1e-300))
    throw SingularGeometry("dual basis: collapsed facet");
  DualBasis b;
  b.coeffs = de * me.inverse();
  return b;
}

DualBasis dual_coeffs(const Mesh& mesh, Index f, const VecX& d) {
  const Facet& fc = mesh.facets.at(f);
  return dual_coeffs(current_position(mesh, d, fc.nodes[0]), current_position(mesh, d, fc.nodes[1]));
}

MasterPolyline MasterPolyline::from_mesh(const Mesh& mesh, const VecX& d) {
  MasterPolyline m;
  m.mesh_nodes = mesh.nodes_in(BoundarySet::Master);
  std::vector<Index> local(mesh.num_nodes(), -1);
  for (std::size_t i = 0; i < m.mesh_nodes.size(); ++i) {
    local[m.mesh_nodes[i]] = static_cast<Index>(i);
    m.x.push_back(current_position(mesh, d, m.mesh_nodes[i]));
  }
  for (const Facet& f : mesh.facets)
    if (f.set == BoundarySet::Master) m.segments.push_back({local[f.nodes[0]], local[f.nodes[1]]});
  return m;
}

std::optional<Projection> project_to_master(const Vec2& x, const Vec2& n, const RigidLine& m,
                                            double radius) {
  const double denom = n.dot(m.normal);
  if (!(denom < 0.0)) return std::nullopt;
  const double s = (m.point - x).dot(m.normal) / denom;
  if (std::abs(s) > radius) return std::nullopt;
  return Projection{-1, 0.0, s, x + s * n};
}

std::optional<Projection> project_to_master(const Vec2& x, const Vec2& n, const MasterPolyline& m,
                                            double radius) {
  std::optional<Projection> best;
  for (std::size_t k = 0; k < m.segments.size(); ++k) {
    const Vec2& a = m.x[m.segments[k][0]];
    const Vec2& b = m.x[m.segments[k][1]];
    const Vec2 e = b - a;
    const Vec2 mn(e.y(), -e.x());
    if (!(n.dot(mn) < 0.0)) continue;
    // x + s n = a + u e
    Mat2 A;
    A.col(0) = n;
    A.col(1) = -e;
    const double det = A.determinant();
    if (std::abs(det) < 1e-300) continue;
    const Vec2 su = A.inverse() * (a - x);
    const double s = su[0], u = su[1];
    if (u < 0.0 || u > 1.0 || std::abs(s) > radius) continue;
    if (!best || std::abs(s) < std::abs(best->s))
      best = Projection{static_cast<Index>(k), 2.0 * u - 1.0, s, x + s * n};
  }
  return best;
}

MortarMatrices assemble_mortar(const Mesh& mesh, const InterfaceMesh& iface,
                               const MasterPolyline& master, const VecX& d, double radius,
                               int n_gauss) {
  MortarMatrices mm;
  const Index ns = iface.num_nodes();
  mm.D = VecX::Zero(ns);
  mm.projections.resize(iface.num_facets());
  std::vector<Triplet> trip;
  const auto gauss = fe::gauss_line(n_gauss);
  for (Index e = 0; e < iface.num_facets(); ++e) {
    const Vec2 x0 = current_position(mesh, d, iface.nodes[e]);
    const Vec2 x1 = current_position(mesh, d, iface.nodes[e + 1]);
    const DualBasis dual = dual_coeffs(x0, x1);
    const auto fr = kernel::facet_frame<double>(x0, x1);
    mm.D[e] += 0.5 * fr.length;
    mm.D[e + 1] += 0.5 * fr.length;
    for (std::size_t k = 0; k < master.segments.size(); ++k) {
      const Index ma = master.segments[k][0], mb = master.segments[k][1];
      const Vec2 a = master.x[ma], b = master.x[mb];
      const Vec2 me = b - a;
      if (!(fr.n.dot(Vec2(me.y(), -me.x())) < 0.0)) continue;
      const double xa = 2.0 * (a - x0).dot(fr.t) / fr.length - 1.0;
      const double xb = 2.0 * (b - x0).dot(fr.t) / fr.length - 1.0;
      const double lo = std::max(-1.0, std::min(xa, xb));
      const double hi = std::min(1.0, std::max(xa, xb));
      if (!(hi - lo > 1e-14)) continue;
      double mrow[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
      for (const auto& gp : gauss) {
        const double xi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gp.xi;
        const auto Ns = fe::line_shape(xi);
        const Vec2 x = Ns[0] * x0 + Ns[1] * x1;
        Mat2 A;
        A.col(0) = fr.n;
        A.col(1) = -me;
        const Vec2 su = A.inverse() * (a - x);
        if (std::abs(su[0]) > radius) continue;
        const double u = std::clamp(su[1], 0.0, 1.0);
        mm.projections[e].push_back({static_cast<Index>(k), 2.0 * u - 1.0, su[0], x + su[0] * fr.n});
        const double w = gp.weight * 0.5 * (hi - lo) * 0.5 * fr.length;
        const auto phi = dual.eval(xi);
        const double Nm[2] = {1.0 - u, u};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) mrow[i][j] += w * phi[i] * Nm[j];
      }
      for (int i = 0; i < 2; ++i) {
        trip.emplace_back(e + i, ma, mrow[i][0]);
        trip.emplace_back(e + i, mb, mrow[i][1]);
      }
    }
  }
  mm.M.resize(ns, master.num_nodes());
  mm.M.setFromTriplets(trip.begin(), trip.end());
  return mm;
}

InterfaceForces transmit_traction(const MortarMatrices& mm, const std::vector<Vec2>& t) {
  assert(static_cast<Index>(t.size()) == mm.D.size());
  InterfaceForces f;
  f.slave.resize(t.size());
  f.master.assign(mm.M.cols(), Vec2::Zero());
  for (std::size_t k = 0; k < t.size(); ++k) f.slave[k] = mm.D[k] * t[k];
  for (int c = 0; c < mm.M.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(mm.M, c); it; ++it) f.master[it.col()] -= it.value() * t[it.row()];
  return f;
}

// ---------------------------------------------------------------------------

std::vector<Vec2> interface_positions(const Mesh& mesh, const InterfaceMesh& iface, const VecX& d) {
  std::vector<Vec2> x(iface.num_nodes());
  for (Index k = 0; k < iface.num_nodes(); ++k) x[k] = current_position(mesh, d, iface.nodes[k]);
  return x;
}

std::vector<bool> lubricated_facets(const Mesh& mesh, const InterfaceMesh& iface, const VecX& d,
                                    const RigidLine& master, double radius) {
  const auto x = interface_positions(mesh, iface, d);
  std::vector<bool> ok(iface.num_facets(), false);
  for (Index e = 0; e < iface.num_facets(); ++e) {
    const auto fr = kernel::facet_frame<double>(x[e], x[e + 1]);
    bool all = project_to_master(x[e], fr.n, master, radius) &&
               project_to_master(x[e + 1], fr.n, master, radius);
    for (const auto& gp : fe::gauss_line(3)) {
      if (!all) break;
      const auto N = fe::line_shape(gp.xi);
      all = project_to_master(Vec2(N[0] * x[e] + N[1] * x[e + 1]), fr.n, master, radius)
                .has_value();
    }
    ok[e] = all;
  }
  return ok;
}

namespace {

kernel::NodeGeometry<double> node_geo(const std::vector<Vec2>& x, Index k, const RigidLine& m,
                                      const std::vector<bool>& lub) {
  const Index nf = static_cast<Index>(lub.size());
  const Vec2* left = (k > 0 && lub[k - 1]) ? &x[k - 1] : nullptr;
  const Vec2* right = (k < nf && lub[k]) ? &x[k + 1] : nullptr;
  return kernel::node_geometry<double>(left, x[k], right, m);
}

}  // namespace

InterfaceKinematics interface_kinematics(const Mesh& mesh, const InterfaceMesh& iface,
                                         const VecX& d, const VecX& v, const RigidLine& m,
                                         const std::vector<bool>& lub) {
  const auto x = interface_positions(mesh, iface, d);
  const Index n = iface.num_nodes();
  InterfaceKinematics ik;
  ik.D = VecX::Zero(n);
  ik.gap = VecX::Zero(n);
  ik.normal.assign(n, Vec2::Zero());
  ik.v_slave.assign(n, Vec2::Zero());
  ik.v_master.assign(n, Vec2::Zero());
  for (Index k = 0; k < n; ++k) {
    const auto g = node_geo(x, k, m, lub);
    if (!(g.D > 0.0)) continue;
    ik.D[k] = g.D;
    ik.gap[k] = g.gap;
    ik.normal[k] = g.n;
    ik.v_slave[k] = kernel::tangential<double>(v.segment<2>(kDim * iface.nodes[k]), g.t);
    ik.v_master[k] = kernel::tangential<double>(m.velocity, g.t);
  }
  return ik;
}

std::optional<double> weighted_gap(const Mesh& mesh, const InterfaceMesh& iface, Index k,
                                   const VecX& d, const RigidLine& m, const std::vector<bool>& lub) {
  const auto g = node_geo(interface_positions(mesh, iface, d), k, m, lub);
  if (!(g.D > 0.0)) return std::nullopt;
  return g.gap;
}

std::optional<Vec2> weighted_rel_velocity(const Mesh& mesh, const InterfaceMesh& iface, Index k,
                                          const VecX& d, const VecX& v, const RigidLine& m,
                                          const std::vector<bool>& lub) {
  const auto g = node_geo(interface_positions(mesh, iface, d), k, m, lub);
  if (!(g.D > 0.0)) return std::nullopt;
  const Vec2 vs = kernel::tangential<double>(v.segment<2>(kDim * iface.nodes[k]), g.t);
  const Vec2 vm = kernel::tangential<double>(m.velocity, g.t);
  return Vec2(0.5 * (vs - vm));
}

std::vector<Vec2> smooth_nodal_traction_gradient(const std::vector<Vec2>& x, const VecX& p,
                                                 const std::vector<bool>& lub) {
  const Index n = static_cast<Index>(x.size());
  std::vector<Vec2> g(n, Vec2::Zero());
  VecX D = VecX::Zero(n);
  for (Index e = 0; e + 1 < n; ++e) {
    if (!lub[e]) continue;
    const auto fr = kernel::facet_frame<double>(x[e], x[e + 1]);
    // int phi_k over the facet is L/2 for both nodes; grad p is constant on it
    const Vec2 contrib = 0.5 * (p[e + 1] - p[e]) * fr.t;
    g[e] += contrib;
    g[e + 1] += contrib;
    D[e] += 0.5 * fr.length;
    D[e + 1] += 0.5 * fr.length;
  }
  for (Index k = 0; k < n; ++k)
    if (D[k] > 0.0) g[k] /= D[k];
  return g;
}

}  // namespace ehl
