#include "support.hpp"

#include "ehl/lubrication.hpp"
#include "ehl/material.hpp"
#include "ehl/mortar.hpp"
#include "ehl/solid.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ehl;

void BM_MaterialTangent(benchmark::State& state) {
  const NeoHookeanParams p{1e-2, 0.3, 0.0};
  Mat2 F;
  F << 1.05, 0.02, -0.01, 0.97;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pk2_stress(F, p));
    benchmark::DoNotOptimize(material_tangent(F, p));
  }
}
BENCHMARK(BM_MaterialTangent);

void BM_SolidStiffness(benchmark::State& state) {
  const ScenarioModel m = build_pin_model(test::small_pin(state.range(0), state.range(0) / 2));
  VecX d = VecX::Zero(m.mesh->num_dofs());
  for (Index n = 0; n < m.mesh->num_nodes(); ++n) d[2 * n + 1] = -1e-3 * m.mesh->nodes[n].y();
  for (auto _ : state) benchmark::DoNotOptimize(stiffness(*m.mesh, m.problem.material, d));
  state.SetItemsProcessed(state.iterations() * m.mesh->num_elements());
}
BENCHMARK(BM_SolidStiffness)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

// Full coupled block system: solid, Reynolds rows and contact rows with
// their automatic-differentiation stencils.
void BM_CoupledAssemble(benchmark::State& state) {
  test::Pressed s = test::pressed_pin(2e-3, 0.25, 0.1, state.range(0), state.range(0) / 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(s.model.problem, s.ctx, s.it));
}
BENCHMARK(BM_CoupledAssemble)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_CondenseContact(benchmark::State& state) {
  test::Pressed s = test::pressed_pin(2e-3, 0.25, 0.1, state.range(0), state.range(0) / 2);
  const BlockSystem sys = assemble(s.model.problem, s.ctx, s.it);
  for (auto _ : state)
    benchmark::DoNotOptimize(condense_contact(sys, s.ctx, s.model.problem));
}
BENCHMARK(BM_CondenseContact)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

void BM_ReynoldsResidual(benchmark::State& state) {
  const Index n = state.range(0);
  InterfaceGeometry g;
  LubricationField f;
  for (Index i = 0; i <= n; ++i) {
    const double x = double(i) / n;
    g.x.emplace_back(x, 0.0);
    g.normal.emplace_back(0.0, -1.0);
    f.v_slave.emplace_back(0.0, 0.0);
    f.v_master.emplace_back(0.1, 0.0);
  }
  g.lubricated.assign(n, true);
  f.h = VecX::LinSpaced(n + 1, 2e-3, 1e-3);
  f.h_prev = f.h;
  f.p = VecX::LinSpaced(n + 1, 0.0, 1e-3);
  const FluidParams fl;
  for (auto _ : state) benchmark::DoNotOptimize(reynolds_residual(g, f, fl, 0.05));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReynoldsResidual)->Arg(128)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_MortarAssembly(benchmark::State& state) {
  const Mesh m = test::two_bodies(state.range(0), state.range(0) * 3 / 2 + 1, 0.0);
  const VecX d = VecX::Zero(m.num_dofs());
  const InterfaceMesh im = InterfaceMesh::from_slave(m);
  const MasterPolyline mp = MasterPolyline::from_mesh(m, d);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_mortar(m, im, mp, d, 0.1));
}
BENCHMARK(BM_MortarAssembly)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
