#include <benchmark/benchmark.h>

#include "afem/estimate.hpp"
#include "afem/meshes.hpp"
#include "afem/problem.hpp"
#include "afem/refine.hpp"
#include "afem/solver.hpp"

namespace {

struct Setup {
  afem::ProblemInstance instance = afem::benchmark("lshape");
  afem::Triangulation mesh;
  afem::PiecewiseData pw;

  explicit Setup(int level) : mesh(afem::meshes::lshape()) {
    for (int l = 0; l < level; ++l) mesh = afem::uniform_red_refine(mesh);
    pw = afem::project_p0(instance.field, mesh);
  }
};

void BM_SolveViaEquivalence(benchmark::State& state) {
  const Setup s(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(afem::solve_mixed_via_equivalence(s.mesh, s.pw, s.instance.field.u_D));
  state.counters["ndof"] = double(s.mesh.mixed_ndof());
}
BENCHMARK(BM_SolveViaEquivalence)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SolveMixedDirect(benchmark::State& state) {
  const Setup s(int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(afem::solve_mixed_direct(s.mesh, s.pw, s.instance.field.u_D));
  state.counters["ndof"] = double(s.mesh.mixed_ndof());
}
BENCHMARK(BM_SolveMixedDirect)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const Setup s(int(state.range(0)));
  const auto recon = afem::solve_mixed_via_equivalence(s.mesh, s.pw, s.instance.field.u_D);
  for (auto _ : state) {
    benchmark::DoNotOptimize(afem::estimate_mixed(s.mesh, recon.mixed, recon.u_cr, s.instance.field, s.pw));
  }
  state.counters["ndof"] = double(s.mesh.mixed_ndof());
}
BENCHMARK(BM_Estimate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace
