#pragma once

#include "ehl/scenarios.hpp"

#include <cmath>

namespace ehl::test {

/// Small pin fixture: coarse mesh, pressed a few micrometres.
inline ScenarioConfig small_pin(Index n_surf = 16, Index n_height = 6) {
  ScenarioConfig c = ScenarioConfig::defaults("pin_on_plane");
  c.geometry.n_surf = n_surf;
  c.geometry.n_height = n_height;
  c.pin.load = 1e-5;
  return c;
}

/// Central difference of the full residual w.r.t. every unknown of the
/// block system; returns max |J_fd - J| / (max |J| + tiny) per column block.
struct JacobianCheck {
  double max_abs_err = 0.0;
  double max_abs = 0.0;
  Index worst_row = -1, worst_col = -1;
};

inline JacobianCheck check_jacobian(const CoupledProblem& pb, const StepContext& ctx,
                                    const Iterate& it0, double hd, double hp, double hl) {
  const BlockSystem s0 = assemble(pb, ctx, it0);
  const Eigen::MatrixXd J = Eigen::MatrixXd(s0.full_matrix());
  const Index nd = s0.num_d(), np = s0.num_p(), nl = s0.num_l();
  JacobianCheck out;
  out.max_abs = J.cwiseAbs().maxCoeff();
  auto perturbed = [&](Index col, double h) {
    Iterate it = it0;
    if (col < nd) {
      it.d[pb.dofs.free_dofs()[col]] += h;
    } else if (col < nd + np) {
      for (Index i = 0; i < static_cast<Index>(ctx.p_index.size()); ++i)
        if (ctx.p_index[i] == col - nd) it.p[i] += h;
    } else {
      const Index k = col - nd - np;
      for (Index i = 0; i < static_cast<Index>(ctx.l_index.size()); ++i)
        if (ctx.l_index[i] >= 0 && ctx.l_index[i] == k - k % 2) it.lambda[i][k % 2] += h;
    }
    return assemble(pb, ctx, it).full_residual();
  };
  for (Index col = 0; col < nd + np + nl; ++col) {
    const double h = col < nd ? hd : (col < nd + np ? hp : hl);
    const VecX fd = (perturbed(col, h) - perturbed(col, -h)) / (2 * h);
    for (Index r = 0; r < fd.size(); ++r) {
      const double e = std::abs(fd[r] - J(r, col));
      if (e > out.max_abs_err) {
        out.max_abs_err = e;
        out.worst_row = r;
        out.worst_col = col;
      }
    }
  }
  return out;
}

}  // namespace ehl::test

namespace ehl::test {

/// nx x ny block of bilinear quads on [0, w] x [y0, y0 + h]. Bottom facets are
/// tagged `bottom`, top facets `top`, the sides neumann.
inline Mesh block_mesh(Index nx, Index ny, double w, double h, double y0 = 0.0,
                       BoundarySet bottom = BoundarySet::Dirichlet,
                       BoundarySet top = BoundarySet::Neumann, Body body = Body::Slave) {
  Mesh m;
  auto id = [nx](Index i, Index j) { return j * (nx + 1) + i; };
  for (Index j = 0; j <= ny; ++j)
    for (Index i = 0; i <= nx; ++i) m.nodes.emplace_back(w * i / nx, y0 + h * j / ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i)
      m.elements.push_back({{id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}, body});
  for (Index i = 0; i < nx; ++i) {
    m.facets.push_back({{id(i, 0), id(i + 1, 0)}, bottom});
    m.facets.push_back({{id(i + 1, ny), id(i, ny)}, top});
  }
  for (Index j = 0; j < ny; ++j) {
    m.facets.push_back({{id(nx, j), id(nx, j + 1)}, BoundarySet::Neumann});
    m.facets.push_back({{id(0, j + 1), id(0, j)}, BoundarySet::Neumann});
  }
  return m;
}

// Two-body strip: slave block [0, 1] x [y0, y0 + 0.5] (nx_s facets on its
// bottom), master block [-0.2, 1.2] x [-0.5, 0] (nx_m facets on its top).
inline Mesh two_bodies(Index nx_s, Index nx_m, double y0) {
  Mesh s = block_mesh(nx_s, 2, 1.0, 0.5, y0, BoundarySet::Slave, BoundarySet::Neumann,
                      Body::Slave);
  Mesh m = block_mesh(nx_m, 2, 1.4, 0.5, -0.5, BoundarySet::Neumann, BoundarySet::Master,
                      Body::Master);
  const Index off = s.num_nodes();
  for (Vec2 x : m.nodes) s.nodes.push_back(x - Vec2(0.2, 0.0));
  for (Quad q : m.elements) {
    for (Index& n : q.nodes) n += off;
    s.elements.push_back(q);
  }
  for (Facet f : m.facets) {
    for (Index& n : f.nodes) n += off;
    s.facets.push_back(f);
  }
  return s;
}

struct Pressed {
  ScenarioModel model;
  MonolithicState prev;
  StepContext ctx;
  Iterate it;
};

/// A state pressed `depth` into the plane with a sliding plane, pressures and
/// multipliers set to plausible non-zero values.
inline Pressed pressed_pin(double depth, double mu, double plane_u, Index n_surf = 16,
                           Index n_height = 6) {
  ScenarioConfig c = small_pin(n_surf, n_height);
  c.friction.mu = mu;
  Pressed s{build_pin_model(c), {}, {}, {}};
  s.prev = MonolithicState::initial(s.model.problem);
  s.model.controls->top_y = -depth;
  s.model.controls->plane_u = plane_u;
  s.ctx = begin_step(s.model.problem, s.prev, 0.1);
  const auto& pb = s.model.problem;
  s.it.d = s.prev.solid.d;
  pb.dofs.apply(s.it.d, s.ctx.t);
  // crude elastic guess: shift the whole pin down, squeeze the bottom. The
  // small jitter keeps nodes off the kinks of the active-set switches.
  for (Index n = 0; n < pb.mesh->num_nodes(); ++n) {
    const double y = pb.mesh->nodes[n].y();
    s.it.d[2 * n + 1] = -depth * std::min(1.0, (y + 0.01) / 0.3) + 1e-5 * std::sin(3.1 * n);
    s.it.d[2 * n] = 1e-5 * std::cos(2.3 * n);
  }
  pb.dofs.apply(s.it.d, s.ctx.t);
  s.it.p = VecX::Zero(pb.iface.num_nodes());
  s.it.lambda.assign(pb.iface.num_nodes(), Vec2::Zero());
  for (Index i = 0; i < pb.iface.num_nodes(); ++i) {
    if (s.ctx.p_free[i]) s.it.p[i] = 1e-5 * (1.0 + 0.3 * std::sin(1.7 * i));
    if (s.ctx.contact[i]) s.it.lambda[i] = Vec2(1e-6 * std::cos(i), 3e-5 * (1 + 0.2 * i));
  }
  return s;
}

}  // namespace ehl::test
