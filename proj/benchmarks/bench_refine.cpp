#include <benchmark/benchmark.h>

#include <vector>

#include "afem/meshes.hpp"
#include "afem/refine.hpp"

namespace {

void BM_UniformRefine(benchmark::State& state) {
  afem::Triangulation mesh = afem::meshes::lshape();
  for (int l = 0; l < state.range(0); ++l) mesh = afem::uniform_red_refine(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(afem::uniform_red_refine(mesh));
  state.SetItemsProcessed(state.iterations() * int64_t(mesh.num_triangles()));
}
BENCHMARK(BM_UniformRefine)->DenseRange(2, 5);

// Marks every tenth triangle, which exercises the green and blue closure.
void BM_RgbRefine(benchmark::State& state) {
  afem::Triangulation mesh = afem::meshes::lshape();
  for (int l = 0; l < state.range(0); ++l) mesh = afem::uniform_red_refine(mesh);
  std::vector<int> marked;
  for (int t = 0; t < int(mesh.num_triangles()); t += 10) marked.push_back(t);
  for (auto _ : state) benchmark::DoNotOptimize(afem::rgb_refine(mesh, marked));
  state.SetItemsProcessed(state.iterations() * int64_t(mesh.num_triangles()));
}
BENCHMARK(BM_RgbRefine)->DenseRange(2, 5);

}  // namespace
