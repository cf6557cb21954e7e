#include <benchmark/benchmark.h>

#include "afem/assembly.hpp"
#include "afem/meshes.hpp"
#include "afem/problem.hpp"
#include "afem/refine.hpp"

namespace {

afem::Triangulation lshape_level(int level) {
  afem::Triangulation mesh = afem::meshes::lshape();
  for (int l = 0; l < level; ++l) mesh = afem::uniform_red_refine(mesh);
  return mesh;
}

void BM_ProjectData(benchmark::State& state) {
  const auto mesh = lshape_level(int(state.range(0)));
  const auto inst = afem::benchmark("lshape");
  for (auto _ : state) benchmark::DoNotOptimize(afem::project_p0(inst.field, mesh));
  state.SetItemsProcessed(state.iterations() * int64_t(mesh.num_triangles()));
}
BENCHMARK(BM_ProjectData)->DenseRange(2, 5);

void BM_AssembleModified(benchmark::State& state) {
  const auto mesh = lshape_level(int(state.range(0)));
  const auto pw = afem::project_p0(afem::benchmark("lshape").field, mesh);
  for (auto _ : state) benchmark::DoNotOptimize(afem::assemble_modified_ncfem(mesh, pw));
  state.SetItemsProcessed(state.iterations() * int64_t(mesh.num_triangles()));
}
BENCHMARK(BM_AssembleModified)->DenseRange(2, 5);

void BM_AssembleMixed(benchmark::State& state) {
  const auto mesh = lshape_level(int(state.range(0)));
  const auto pw = afem::project_p0(afem::benchmark("lshape").field, mesh);
  for (auto _ : state) benchmark::DoNotOptimize(afem::assemble_mixed_direct(mesh, pw));
  state.SetItemsProcessed(state.iterations() * int64_t(mesh.num_triangles()));
}
BENCHMARK(BM_AssembleMixed)->DenseRange(2, 5);

}  // namespace
