#include "ehl/coupled.hpp"

#include "ehl/errors.hpp"
#include "interface.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace ehl {

void CoupledProblem::prepare() {
  if (!mesh) throw ConfigError("coupled problem without a mesh");
  mesh->validate();
  material.validate();
  reg.validate();
  friction.validate();
  if (lubrication) fluid.validate();
  if (iface.nodes.empty()) iface = InterfaceMesh::from_slave(*mesh);
  if (dofs.num_dofs() != mesh->num_dofs()) throw ConfigError("dof map does not match the mesh");
}

namespace {

detail::InterfaceStep make_interface_step(const CoupledProblem& pb, const StepContext& ctx,
                                          const VecX& h_prev, const VecX& d_prev,
                                          const VecX& v_off, double cv) {
  detail::InterfaceStep s;
  s.mesh = pb.mesh;
  s.iface = &pb.iface;
  s.master = ctx.master;
  s.lubricated = ctx.lubricated;
  s.p_free = ctx.p_free;
  s.contact = ctx.contact;
  s.h_prev = h_prev;
  s.inv_dt = ctx.dt > 0.0 ? 1.0 / ctx.dt : 0.0;
  s.cv = cv;
  s.d_prev = &d_prev;
  s.v_off = &v_off;
  s.fluid = pb.fluid;
  s.reg = pb.reg;
  s.friction = pb.friction;
  s.c_n = pb.cn();
  s.c_t = pb.ct();
  s.lubrication = pb.lubrication;
  return s;
}

bool touches_lubricated(const std::vector<bool>& lub, Index i) {
  const Index nf = static_cast<Index>(lub.size());
  return (i > 0 && lub[i - 1]) || (i < nf && lub[i]);
}

VecX film_at(const CoupledProblem& pb, const VecX& d, const RigidLine& master,
             const std::vector<bool>& lub) {
  const VecX v = VecX::Zero(d.size());
  const auto ik = interface_kinematics(*pb.mesh, pb.iface, d, v, master, lub);
  VecX h = VecX::Constant(pb.iface.num_nodes(), pb.reg.g_max);
  for (Index k = 0; k < pb.iface.num_nodes(); ++k)
    if (ik.D[k] > 0.0) h[k] = pb.reg.film(ik.gap[k]);
  return h;
}

}  // namespace

MonolithicState MonolithicState::initial(const CoupledProblem& pb) {
  MonolithicState s;
  const Index n = pb.mesh->num_dofs();
  s.solid = SolidState::zero(n);
  pb.dofs.apply(s.solid.d, 0.0);
  const Index ni = pb.iface.num_nodes();
  s.p = VecX::Zero(ni);
  s.lambda.assign(ni, Vec2::Zero());
  s.status.assign(ni, ContactStatus::Inactive);
  const RigidLine master = pb.master(0.0);
  s.lubricated = lubricated_facets(*pb.mesh, pb.iface, s.solid.d, master, pb.radius());
  s.h = film_at(pb, s.solid.d, master, s.lubricated);
  s.F = internal_force(*pb.mesh, pb.material, s.solid.d) - external_force(*pb.mesh, pb.loads);
  return s;
}

StepContext begin_step(const CoupledProblem& pb, const MonolithicState& prev, double dt) {
  StepContext c;
  c.dt = dt;
  c.t = prev.solid.t + dt;
  c.master = pb.master(c.t);
  c.prev = &prev;
  c.kin = step_kinematics(pb.integrator, prev.solid, dt);
  const Index ni = pb.iface.num_nodes();
  if (pb.lubrication || pb.contact)
    c.lubricated = lubricated_facets(*pb.mesh, pb.iface, prev.solid.d, c.master, pb.radius());
  else
    c.lubricated.assign(pb.iface.num_facets(), false);
  c.p_free.assign(ni, false);
  c.contact.assign(ni, false);
  c.p_index.assign(ni, -1);
  c.l_index.assign(ni, -1);
  for (Index i = 0; i < ni; ++i) {
    const Index m = pb.iface.nodes[i];
    const bool interior = i > 0 && i < ni - 1 && c.lubricated[i - 1] && c.lubricated[i];
    c.p_free[i] = pb.lubrication && interior;
    c.contact[i] = pb.contact && touches_lubricated(c.lubricated, i) &&
                   !pb.dofs.is_fixed(kDim * m) && !pb.dofs.is_fixed(kDim * m + 1);
    if (c.p_free[i]) c.p_index[i] = c.num_p++;
    if (c.contact[i]) {
      c.l_index[i] = c.num_l;
      c.num_l += 2;
    }
  }
  return c;
}

SparseMatrix BlockSystem::full_matrix() const {
  const Index nd = num_d(), np = num_p(), nl = num_l();
  std::vector<Triplet> t;
  auto put = [&t](const SparseMatrix& B, Index r0, Index c0) {
    for (int c = 0; c < B.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(B, c); it; ++it)
        t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  };
  put(K_dd, 0, 0);
  put(K_dp, 0, nd);
  put(K_dl, 0, nd + np);
  put(K_pd, nd, 0);
  put(K_pp, nd, nd);
  put(K_ld, nd + np, 0);
  put(K_lp, nd + np, nd);
  put(K_ll, nd + np, nd + np);
  SparseMatrix A(nd + np + nl, nd + np + nl);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

VecX BlockSystem::full_residual() const {
  VecX r(num_d() + num_p() + num_l());
  r << r_d, r_p, r_l;
  return r;
}

BlockSystem assemble(const CoupledProblem& pb, const StepContext& ctx, const Iterate& it) {
  const Mesh& mesh = *pb.mesh;
  const MonolithicState& prev = *ctx.prev;
  const DofMap& dofs = pb.dofs;
  const Index nd = dofs.num_free(), np = ctx.num_p, nl = ctx.num_l;
  const Index ndof = mesh.num_dofs();
  const StepKinematics& kin = ctx.kin;
  const double wf = kin.w_force;
  const bool dynamic = pb.integrator.scheme == TimeScheme::GeneralizedAlpha;

  BlockSystem sys;
  std::vector<Triplet> t_dd, t_dp, t_dl, t_pd, t_pp, t_ld, t_lp, t_ll;

  // Bulk solid.
  std::vector<Triplet> kt;
  VecX f_int;
  assemble_internal(mesh, pb.material, it.d, &f_int, &kt);
  const VecX f_ext = external_force(mesh, pb.loads);
  VecX r_full = VecX::Zero(ndof);
  for (const auto& t : kt) {
    const Index i = dofs.free_index(t.row()), j = dofs.free_index(t.col());
    if (i >= 0 && j >= 0) t_dd.emplace_back(i, j, wf * t.value());
  }
  double scale_d = std::max(f_int.lpNorm<Eigen::Infinity>(), f_ext.lpNorm<Eigen::Infinity>());
  if (dynamic) {
    const SparseMatrix M = mass_matrix(mesh, pb.material.density);
    const VecX a = kin.acceleration(it.d, prev.solid.d);
    const VecX inertia = M * (kin.w_inertia * a + kin.alpha_m * prev.solid.a);
    r_full += inertia;
    scale_d = std::max(scale_d, inertia.lpNorm<Eigen::Infinity>());
    for (int c = 0; c < M.outerSize(); ++c)
      for (SparseMatrix::InnerIterator m(M, c); m; ++m) {
        const Index i = dofs.free_index(m.row()), j = dofs.free_index(m.col());
        if (i >= 0 && j >= 0) t_dd.emplace_back(i, j, kin.w_inertia * kin.ca * m.value());
      }
  }

  // Interface.
  const Index ni = pb.iface.num_nodes();
  VecX f_lub = VecX::Zero(ndof);
  sys.r_p = VecX::Zero(np);
  sys.r_l = VecX::Zero(nl);
  sys.r_l_scaled = VecX::Zero(nl);
  sys.status.assign(ni, ContactStatus::Inactive);
  sys.lambda_n.assign(ni, 0.0);
  double scale_p = 0.0, scale_l = 0.0, max_weight = 0.0;
  for (Index i = 0; i < ni; ++i) scale_l = std::max(scale_l, it.lambda[i].lpNorm<Eigen::Infinity>());

  const detail::InterfaceStep s = make_interface_step(
      pb, ctx, [&] {
        return film_at(pb, prev.solid.d, ctx.master, ctx.lubricated);
      }(), prev.solid.d, kin.v_off, kin.cv);

  for (Index i = 0; i < ni; ++i) {
    if (!touches_lubricated(ctx.lubricated, i)) continue;
    const detail::NodeResult nr = detail::evaluate_node(s, it.d, it.p, it.lambda, i);
    if (!nr.has_geometry) continue;
    sys.status[i] = nr.status;
    sys.lambda_n[i] = nr.lambda_n;
    max_weight = std::max(max_weight, nr.D);

    // column of stencil direction k in the (d | p | l) blocks: block id, index
    auto column = [&](int k, int& block) -> Index {
      if (k < 10) {
        const Index m = nr.mesh_nodes[k / 2];
        block = 0;
        return m < 0 ? -1 : dofs.free_index(kDim * m + k % 2);
      }
      if (k < 13) {
        const Index j = nr.p_nodes[k - 10];
        block = 1;
        return j < 0 ? -1 : ctx.p_index[j];
      }
      block = 2;
      return ctx.l_index[i] < 0 ? -1 : ctx.l_index[i] + (k - 13);
    };

    // r_d gets -w_f f_lub
    const Index m = pb.iface.nodes[i];
    f_lub.segment<2>(kDim * m) += nr.force;
    for (int c = 0; c < 2; ++c) {
      const Index row = dofs.free_index(kDim * m + c);
      if (row < 0) continue;
      for (int k = 0; k < detail::kStencil; ++k) {
        const double v = -wf * nr.dforce(c, k);
        if (v == 0.0) continue;
        int b;
        const Index col = column(k, b);
        if (col < 0) continue;
        (b == 0 ? t_dd : b == 1 ? t_dp : t_dl).emplace_back(row, col, v);
      }
    }
    if (ctx.p_index[i] >= 0) {
      const Index row = ctx.p_index[i];
      sys.r_p[row] = nr.rp;
      scale_p = std::max(scale_p, nr.rp_scale);
      for (int k = 0; k < 13; ++k) {
        if (nr.drp[k] == 0.0) continue;
        int b;
        const Index col = column(k, b);
        if (col >= 0) (b == 0 ? t_pd : t_pp).emplace_back(row, col, nr.drp[k]);
      }
    }
    if (ctx.l_index[i] >= 0) {
      const Index row0 = ctx.l_index[i];
      for (int c = 0; c < 2; ++c) {
        sys.r_l[row0 + c] = nr.ncp[c];
        sys.r_l_scaled[row0 + c] = c == 0 ? nr.ncp[0] : nr.ncp[1] / nr.ncp_tau_scale;
        for (int k = 0; k < detail::kStencil; ++k) {
          const double v = nr.dncp(c, k);
          if (v == 0.0) continue;
          int b;
          const Index col = column(k, b);
          if (col < 0) continue;
          (b == 0 ? t_ld : b == 1 ? t_lp : t_ll).emplace_back(row0 + c, col, v);
        }
      }
    }
  }

  r_full += wf * (f_int - f_ext - f_lub) + (1.0 - wf) * prev.F;
  scale_d = std::max(scale_d, f_lub.lpNorm<Eigen::Infinity>());
  sys.r_d.resize(nd);
  for (Index i = 0; i < nd; ++i) sys.r_d[i] = r_full[dofs.free_dofs()[i]];

  auto build = [](SparseMatrix& B, Index r, Index c, const std::vector<Triplet>& t) {
    B.resize(r, c);
    B.setFromTriplets(t.begin(), t.end());
  };
  build(sys.K_dd, nd, nd, t_dd);
  build(sys.K_dp, nd, np, t_dp);
  build(sys.K_dl, nd, nl, t_dl);
  build(sys.K_pd, np, nd, t_pd);
  build(sys.K_pp, np, np, t_pp);
  build(sys.K_ld, nl, nd, t_ld);
  build(sys.K_lp, nl, np, t_lp);
  build(sys.K_ll, nl, nl, t_ll);
  sys.scale_d = scale_d;
  sys.scale_p = scale_p;
  // Multiplier rows are pressures: with no multiplier yet, compare them with
  // the fluid pressure and the largest nodal force per weight instead.
  if (it.p.size()) scale_l = std::max(scale_l, it.p.lpNorm<Eigen::Infinity>());
  if (max_weight > 0.0) scale_l = std::max(scale_l, sys.scale_d / max_weight);
  sys.scale_l = scale_l;
  sys.f_lub = f_lub;
  sys.f_int = f_int;
  sys.f_ext = f_ext;
  return sys;
}

ReducedSystem condense_contact(const BlockSystem& sys, const StepContext& ctx,
                               const CoupledProblem& pb) {
  using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  const Index nd = sys.num_d(), np = sys.num_p(), nl = sys.num_l();
  RowMat top(nd, nd + np);
  {
    std::vector<Triplet> t;
    for (int c = 0; c < sys.K_dd.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(sys.K_dd, c); it; ++it)
        t.emplace_back(it.row(), it.col(), it.value());
    for (int c = 0; c < sys.K_dp.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(sys.K_dp, c); it; ++it)
        t.emplace_back(it.row(), nd + it.col(), it.value());
    top.setFromTriplets(t.begin(), t.end());
  }
  RowMat low(nl, nd + np);
  {
    std::vector<Triplet> t;
    for (int c = 0; c < sys.K_ld.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(sys.K_ld, c); it; ++it)
        t.emplace_back(it.row(), it.col(), it.value());
    for (int c = 0; c < sys.K_lp.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(sys.K_lp, c); it; ++it)
        t.emplace_back(it.row(), nd + it.col(), it.value());
    low.setFromTriplets(t.begin(), t.end());
  }

  // Rows of the slave displacement dofs of each contact node.
  std::vector<Index> replaced(nd, -1);  // free d row -> multiplier row of the same component
  const Index ni = pb.iface.num_nodes();
  std::vector<std::array<Index, 2>> node_rows(ni, {-1, -1});
  for (Index i = 0; i < ni; ++i) {
    if (ctx.l_index[i] < 0) continue;
    const Index m = pb.iface.nodes[i];
    for (int c = 0; c < 2; ++c) {
      node_rows[i][c] = pb.dofs.free_index(kDim * m + c);
      if (node_rows[i][c] < 0) throw StepFailure("contact node with a constrained dof");
      replaced[node_rows[i][c]] = ctx.l_index[i] + c;
    }
  }

  std::vector<Triplet> ta, tr;
  ReducedSystem red;
  red.b = VecX::Zero(nd + np);
  red.rec_c = VecX::Zero(nl);
  for (Index r = 0; r < nd; ++r) {
    if (replaced[r] >= 0) continue;
    for (RowMat::InnerIterator it(top, r); it; ++it) ta.emplace_back(r, it.col(), it.value());
    red.b[r] = -sys.r_d[r];
  }
  for (int c = 0; c < sys.K_pd.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(sys.K_pd, c); it; ++it)
      ta.emplace_back(nd + it.row(), it.col(), it.value());
  for (int c = 0; c < sys.K_pp.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(sys.K_pp, c); it; ++it)
      ta.emplace_back(nd + it.row(), nd + it.col(), it.value());
  for (Index r = 0; r < np; ++r) red.b[nd + r] = -sys.r_p[r];

  // Dense 2x2 blocks of K_dl and K_ll per node.
  for (Index i = 0; i < ni; ++i) {
    const Index l0 = ctx.l_index[i];
    if (l0 < 0) continue;
    Mat2 G = Mat2::Zero(), L = Mat2::Zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        G(a, b) = sys.K_dl.coeff(node_rows[i][a], l0 + b);
        L(a, b) = sys.K_ll.coeff(l0 + a, l0 + b);
      }
    if (!(std::abs(G.determinant()) > 0.0))
      throw StepFailure("singular multiplier elimination block at interface node " +
                        std::to_string(i));
    const Mat2 Gi = G.inverse();
    const Mat2 LGi = L * Gi;
    const Vec2 rd(sys.r_d[node_rows[i][0]], sys.r_d[node_rows[i][1]]);
    const Vec2 rl(sys.r_l[l0], sys.r_l[l0 + 1]);
    // new rows: K_l* - L G^-1 K_d*  =  -r_l + L G^-1 r_d
    for (int a = 0; a < 2; ++a) {
      const Index row = node_rows[i][a];
      for (RowMat::InnerIterator it(low, l0 + a); it; ++it) ta.emplace_back(row, it.col(), it.value());
      for (int b = 0; b < 2; ++b) {
        if (LGi(a, b) == 0.0 && Gi(a, b) == 0.0) continue;
        for (RowMat::InnerIterator it(top, node_rows[i][b]); it; ++it) {
          if (LGi(a, b) != 0.0) ta.emplace_back(row, it.col(), -LGi(a, b) * it.value());
          if (Gi(a, b) != 0.0) tr.emplace_back(l0 + a, it.col(), Gi(a, b) * it.value());
        }
      }
      red.b[row] = -rl[a] + (LGi * rd)[a];
    }
    const Vec2 rc = -Gi * rd;
    red.rec_c[l0] = rc[0];
    red.rec_c[l0 + 1] = rc[1];
  }
  red.A.resize(nd + np, nd + np);
  red.A.setFromTriplets(ta.begin(), ta.end());
  red.rec_A.resize(nl, nd + np);
  red.rec_A.setFromTriplets(tr.begin(), tr.end());
  return red;
}

namespace {

/// Largest block scales seen so far in the step. A rigid-body state has no
/// internal force, so the current iterate alone cannot normalize its residual.
struct Scales {
  double d = 0.0, p = 0.0, l = 0.0;
};

double normalized_residual(const BlockSystem& sys, Scales& ref) {
  ref.d = std::max(ref.d, sys.scale_d);
  ref.p = std::max(ref.p, sys.scale_p);
  ref.l = std::max(ref.l, sys.scale_l);
  auto ratio = [](double r, double s) { return s > 0.0 ? r / s : r; };
  const double rd = ratio(sys.r_d.size() ? sys.r_d.lpNorm<Eigen::Infinity>() : 0.0, ref.d);
  const double rp = ratio(sys.r_p.size() ? sys.r_p.lpNorm<Eigen::Infinity>() : 0.0, ref.p);
  const double rl =
      ratio(sys.r_l_scaled.size() ? sys.r_l_scaled.lpNorm<Eigen::Infinity>() : 0.0, ref.l);
  return std::max({rd, rp, rl});
}

}  // namespace

MonolithicState semismooth_newton(const CoupledProblem& pb, const MonolithicState& prev, double dt,
                                  NewtonReport* report) {
  const StepContext ctx = begin_step(pb, prev, dt);
  const DofMap& dofs = pb.dofs;
  const Index nd = dofs.num_free(), np = ctx.num_p;
  const Index ni = pb.iface.num_nodes();

  Iterate it;
  it.d = prev.solid.d;
  dofs.apply(it.d, ctx.t);
  it.p = prev.p;
  it.lambda = prev.lambda;
  for (Index i = 0; i < ni; ++i) {
    if (!ctx.p_free[i]) it.p[i] = 0.0;
    if (!ctx.contact[i]) it.lambda[i].setZero();
  }

  NewtonReport rep;
  std::vector<ContactStatus> last_status = prev.status;
  Eigen::SparseLU<SparseMatrix> lu;
  bool pattern_known = false;
  Scales ref;
  for (int iter = 1; iter <= pb.solver.max_iterations; ++iter) {
    BlockSystem sys;
    try {
      sys = assemble(pb, ctx, it);
    } catch (const InvertedElement& e) {
      throw StepFailure(std::string("inverted element during Newton: ") + e.what());
    } catch (const ModelViolation& e) {
      throw StepFailure(std::string("film violation during Newton: ") + e.what());
    } catch (const SingularGeometry& e) {
      throw StepFailure(std::string("singular interface geometry: ") + e.what());
    }
    const double res = normalized_residual(sys, ref);
    rep.residuals.push_back(res);
    rep.iterations = iter;
    const bool stable = sys.status == last_status;
    last_status = sys.status;
    if (stable && res <= pb.solver.tolerance) {
      rep.converged = true;
      if (report) *report = rep;
      MonolithicState next;
      next.solid.d = it.d;
      next.solid.t = ctx.t;
      next.solid.v = ctx.kin.velocity(it.d, prev.solid.d);
      next.solid.a = ctx.kin.acceleration(it.d, prev.solid.d);
      next.p = it.p;
      next.lambda = it.lambda;
      next.status = sys.status;
      next.lubricated = ctx.lubricated;
      next.h = film_at(pb, it.d, ctx.master, ctx.lubricated);
      next.F = sys.f_int - sys.f_ext - sys.f_lub;
      next.step = prev.step + 1;
      return next;
    }
    if (!std::isfinite(res)) break;

    VecX dx, dl;
    if (pb.solver.condense) {
      const ReducedSystem red = condense_contact(sys, ctx, pb);
      if (!pattern_known) {
        lu.analyzePattern(red.A);
        pattern_known = true;
      }
      lu.factorize(red.A);
      if (lu.info() != Eigen::Success) throw StepFailure("singular condensed Newton system");
      dx = lu.solve(red.b);
      dl = red.rec_c - red.rec_A * dx;
    } else {
      const SparseMatrix A = sys.full_matrix();
      lu.compute(A);
      if (lu.info() != Eigen::Success) throw StepFailure("singular Newton system");
      const VecX sol = lu.solve(-sys.full_residual());
      dx = sol.head(nd + np);
      dl = sol.tail(sys.num_l());
    }
    if (!dx.allFinite() || !dl.allFinite()) break;
    for (Index k = 0; k < nd; ++k) it.d[dofs.free_dofs()[k]] += dx[k];
    for (Index i = 0; i < ni; ++i) {
      if (ctx.p_index[i] >= 0) it.p[i] += dx[nd + ctx.p_index[i]];
      if (ctx.l_index[i] >= 0) {
        it.lambda[i].x() += dl[ctx.l_index[i]];
        it.lambda[i].y() += dl[ctx.l_index[i] + 1];
        // inactive rows read lambda = 0; take it exactly instead of up to round-off
        if (sys.status[i] == ContactStatus::Inactive) it.lambda[i].setZero();
      }
    }
  }
  if (report) *report = rep;
  throw StepFailure("semi-smooth Newton did not converge in " +
                    std::to_string(pb.solver.max_iterations) + " iterations (last residual " +
                    (rep.residuals.empty() ? std::string("n/a")
                                           : std::to_string(rep.residuals.back())) +
                    ")");
}

namespace {

MonolithicState advance_rec(const CoupledProblem& pb, const MonolithicState& prev, double dt,
                            int depth, NewtonReport* report) {
  try {
    return semismooth_newton(pb, prev, dt, report);
  } catch (const StepFailure&) {
    if (depth >= pb.solver.max_halvings) throw;
  }
  const MonolithicState mid = advance_rec(pb, prev, 0.5 * dt, depth + 1, report);
  MonolithicState end = advance_rec(pb, mid, 0.5 * dt, depth + 1, report);
  end.step = prev.step + 1;
  return end;
}

}  // namespace

MonolithicState advance(const CoupledProblem& pb, const MonolithicState& prev, double dt,
                        NewtonReport* report) {
  return advance_rec(pb, prev, dt, 0, report);
}

InterfaceSnapshot snapshot(const CoupledProblem& pb, const MonolithicState& s) {
  StepContext ctx;
  ctx.t = s.solid.t;
  ctx.dt = 0.0;
  ctx.master = pb.master(s.solid.t);
  ctx.lubricated = s.lubricated;
  const Index ni = pb.iface.num_nodes();
  ctx.p_free.assign(ni, false);
  ctx.contact.assign(ni, false);
  for (Index i = 0; i < ni; ++i) {
    const Index m = pb.iface.nodes[i];
    ctx.contact[i] = pb.contact && touches_lubricated(s.lubricated, i) &&
                     !pb.dofs.is_fixed(kDim * m) && !pb.dofs.is_fixed(kDim * m + 1);
  }
  const detail::InterfaceStep st = make_interface_step(pb, ctx, s.h, s.solid.d, s.solid.v, 0.0);

  InterfaceSnapshot snap;
  snap.x = interface_positions(*pb.mesh, pb.iface, s.solid.d);
  snap.p = s.p;
  // Outside the film the gap is the signed distance to the master line.
  snap.gap.resize(ni);
  for (Index i = 0; i < ni; ++i) snap.gap[i] = (snap.x[i] - ctx.master.point).dot(ctx.master.normal);
  snap.h = (snap.gap.array() + pb.reg.g_eff()) + pb.reg.tol * pb.reg.g_max;
  snap.in_film.assign(ni, false);
  snap.lambda_n = VecX::Zero(ni);
  snap.lubricated = s.lubricated;
  for (Index i = 0; i < ni; ++i) {
    if (!touches_lubricated(s.lubricated, i)) continue;
    const auto nr = detail::evaluate_node(st, s.solid.d, s.p, s.lambda, i);
    if (!nr.has_geometry) continue;
    snap.in_film[i] = true;
    snap.h[i] = nr.h;
    snap.gap[i] = nr.gap;
    snap.lambda_n[i] = nr.lambda_n;
    snap.slave_force += nr.force;
    snap.fluid_force += nr.fluid_force;
    snap.contact_force += nr.force - nr.fluid_force;
  }
  return snap;
}

Vec2 reaction(const CoupledProblem& pb, const MonolithicState& s, BoundarySet set) {
  VecX r = s.F;
  if (pb.integrator.scheme == TimeScheme::GeneralizedAlpha)
    r += mass_matrix(*pb.mesh, pb.material.density) * s.solid.a;
  Vec2 sum = Vec2::Zero();
  for (Index n : pb.mesh->nodes_in(set))
    for (int c = 0; c < kDim; ++c)
      if (pb.dofs.is_fixed(kDim * n + c)) sum[c] += r[kDim * n + c];
  return sum;
}

}  // namespace ehl
