// Scalar-generic interface kernels shared by the double-precision module
// functions and the automatic-differentiation Jacobian assembly.
#pragma once

#include "ehl/contact_law.hpp"
#include "ehl/errors.hpp"
#include "ehl/fe.hpp"
#include "ehl/lubrication.hpp"
#include "ehl/mortar.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <cmath>

namespace ehl::kernel {

template <typename T>
using V2 = Eigen::Matrix<T, 2, 1>;

template <typename T>
V2<T> lift(const Vec2& v) {
  return V2<T>(T(v.x()), T(v.y()));
}

inline double value_of(double x) { return x; }
template <typename D>
double value_of(const Eigen::AutoDiffScalar<D>& x) {
  return x.value();
}

template <typename T>
T dot2(const V2<T>& a, const V2<T>& b) {
  return a.x() * b.x() + a.y() * b.y();
}

template <typename T>
T dot(const V2<T>& a, const Vec2& b) {
  return a.x() * b.x() + a.y() * b.y();
}

template <typename T>
struct FacetFrame {
  V2<T> t;  // unit tangent x0 -> x1
  V2<T> n;  // outward normal (t_y, -t_x)
  T length;
};

template <typename T>
FacetFrame<T> facet_frame(const V2<T>& x0, const V2<T>& x1) {
  using std::sqrt;
  const V2<T> e = x1 - x0;
  const T len = sqrt(e.x() * e.x() + e.y() * e.y());
  if (!(len > 0.0)) throw SingularGeometry("collapsed interface facet");
  FacetFrame<T> f;
  f.t = e / len;
  f.n = V2<T>(f.t.y(), -f.t.x());
  f.length = len;
  return f;
}

/// Distance along n from x to the rigid line (negative when penetrating).
template <typename T>
T line_gap(const V2<T>& x, const V2<T>& n, const RigidLine& m) {
  const T denom = dot(n, m.normal);
  return dot(V2<T>(lift<T>(m.point) - x), m.normal) / denom;
}

/// Dual shape function of local node a on a straight 2-node facet.
inline double dual_shape(int a, double xi) {
  const auto N = fe::line_shape(xi);
  return 2.0 * N[a] - N[1 - a];
}

/// Contribution of one facet to the dual-weighted gap integral of its local
/// node a: int phi_a g.
template <typename T>
T facet_gap_moment(const V2<T>& x0, const V2<T>& x1, int a, const RigidLine& m) {
  const FacetFrame<T> f = facet_frame(x0, x1);
  T acc = T(0.0);
  for (const auto& gp : fe::gauss_line(3)) {
    const auto N = fe::line_shape(gp.xi);
    const V2<T> x = N[0] * x0 + N[1] * x1;
    acc += gp.weight * dual_shape(a, gp.xi) * line_gap(x, f.n, m);
  }
  return acc * f.length * 0.5;
}

/// Nodal interface geometry of node j from its (optional) left and right
/// lubricated facets.
template <typename T>
struct NodeGeometry {
  T D = T(0.0);
  T gap = T(0.0);
  V2<T> n = V2<T>::Zero();
  V2<T> t = V2<T>::Zero();
};

template <typename T>
NodeGeometry<T> node_geometry(const V2<T>* left, const V2<T>& xj, const V2<T>* right,
                              const RigidLine& m) {
  using std::sqrt;
  NodeGeometry<T> g;
  V2<T> nsum = V2<T>::Zero();
  T moment = T(0.0);
  if (left) {
    const FacetFrame<T> f = facet_frame(*left, xj);
    g.D += 0.5 * f.length;
    nsum += f.n;
    moment += facet_gap_moment(*left, xj, 1, m);
  }
  if (right) {
    const FacetFrame<T> f = facet_frame(xj, *right);
    g.D += 0.5 * f.length;
    nsum += f.n;
    moment += facet_gap_moment(xj, *right, 0, m);
  }
  if (!(g.D > 0.0)) return g;
  g.gap = moment / g.D;
  const T nn = sqrt(nsum.x() * nsum.x() + nsum.y() * nsum.y());
  if (!(nn > 0.0)) throw SingularGeometry("opposing facet normals at an interface node");
  g.n = nsum / nn;
  g.t = V2<T>(-g.n.y(), g.n.x());
  return g;
}

template <typename T>
V2<T> tangential(const V2<T>& v, const V2<T>& t) {
  const T vt = v.x() * t.x() + v.y() * t.y();
  return V2<T>(vt * t.x(), vt * t.y());
}

struct Flow {
  template <typename T>
  struct Factors {
    T phi_p, phi_s, phi_f;
  };
};

template <typename T>
Flow::Factors<T> flow_factors(const T& h, double sigma) {
  if (!(h > 0.0)) throw ModelViolation("non-positive film thickness");
  const T r = sigma / h;
  const T r2 = r * r;
  return {1.0 + 3.0 * r2, (-3.0 * r - 30.0 * r2 * r) / (1.0 + 6.0 * r2), 1.0 + r2};
}

/// Facet data for the Reynolds integrals; index 0/1 = facet nodes.
template <typename T>
struct ReynoldsFacet {
  V2<T> x[2];
  T p[2];
  T h[2];
  double h_prev[2] = {0.0, 0.0};
  V2<T> v_sum[2];   // (v_s + v_m) / 2
  V2<T> v_diff[2];  // (v_s - v_m) / 2
};

/// Adds the Poiseuille, squeeze, Couette and shear contributions of one
/// facet to the two nodal rows. `terms` (optional) receives the four parts
/// separately as [term][node]. inv_dt = 0 drops the squeeze term.
template <typename T>
void reynolds_facet(const ReynoldsFacet<T>& f, const FluidParams& fluid, double inv_dt, T out[2],
                    double terms[4][2] = nullptr) {
  const FacetFrame<T> fr = facet_frame(f.x[0], f.x[1]);
  const T dpds = (f.p[1] - f.p[0]) / fr.length;
  const T dNds[2] = {-1.0 / fr.length, 1.0 / fr.length};
  for (const auto& gp : fe::gauss_line(5)) {
    const auto N = fe::line_shape(gp.xi);
    const T h = N[0] * f.h[0] + N[1] * f.h[1];
    const auto ff = flow_factors(h, fluid.sigma);
    const T w = gp.weight * 0.5 * fr.length;
    const T vplus = N[0] * dot2(f.v_sum[0], fr.t) + N[1] * dot2(f.v_sum[1], fr.t);
    const T vminus = N[0] * dot2(f.v_diff[0], fr.t) + N[1] * dot2(f.v_diff[1], fr.t);
    const T hdot = inv_dt * (h - (N[0] * f.h_prev[0] + N[1] * f.h_prev[1]));
    const T flux = h * h * h / (12.0 * fluid.eta) * ff.phi_p * dpds;
    for (int a = 0; a < 2; ++a) {
      const T psl = w * flux * dNds[a];
      const T sqz = w * hdot * N[a];
      const T ctt = -w * vplus * h * dNds[a];
      const T shr = -w * vminus * fluid.sigma * ff.phi_s * dNds[a];
      out[a] += psl + sqz + ctt + shr;
      if (terms) {
        terms[0][a] += value_of(psl);
        terms[1][a] += value_of(sqz);
        terms[2][a] += value_of(ctt);
        terms[3][a] += value_of(shr);
      }
    }
  }
}

/// Slave-side fluid traction t_par + t_nonpar at a node.
template <typename T>
V2<T> fluid_traction_total(const T& p, const T& h, const V2<T>& n, const V2<T>& grad_p,
                           const V2<T>& v_diff, const FluidParams& fluid, V2<T>* parallel = nullptr) {
  const auto ff = flow_factors(h, fluid.sigma);
  const V2<T> t_par = -(0.5 * h) * ff.phi_p * grad_p;
  const V2<T> t_non = -p * n - (fluid.eta / h) * (ff.phi_f + ff.phi_s) * v_diff;
  if (parallel) *parallel = t_par;
  return t_par + t_non;
}

}  // namespace ehl::kernel
