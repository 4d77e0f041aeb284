#include <benchmark/benchmark.h>

#include "nitsche/experiments.hpp"

using namespace nitsche;

namespace {

RunConfig interface_config(std::size_t nx) {
  RunConfig c;
  c.nx = nx;
  return c;
}

void BM_FittedElementMatrices(benchmark::State& state) {
  auto mesh = build_structured_mesh(8, 8, {0, 0, 1, 1});
  // Triangle 0 touches the boundary, so the lifting is computed.
  for (auto _ : state) benchmark::DoNotOptimize(fitted_element_matrices(mesh, 0));
}
BENCHMARK(BM_FittedElementMatrices);

void BM_CutElementMatrices(benchmark::State& state) {
  auto mesh = build_structured_mesh(16, 16, {-2.01, -2.01, 2.01, 2.01});
  auto cuts = classify_and_cut(mesh, levelset_l4_norm());
  std::size_t t = 0;
  while (!cuts[t].is_cut()) ++t;
  for (auto _ : state)
    benchmark::DoNotOptimize(interface_element_matrices(mesh, t, cuts[t], {1.0, 2.0}));
}
BENCHMARK(BM_CutElementMatrices);

void BM_ClassifyAndCut(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto mesh = build_structured_mesh(n, n, {-2.01, -2.01, 2.01, 2.01});
  auto values = levelset_l4_norm().vertex_values(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(classify_and_cut(mesh, values));
}
BENCHMARK(BM_ClassifyAndCut)->Arg(16)->Arg(64);

void BM_DiscretizeInterface(benchmark::State& state) {
  auto c = interface_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discretize(c));
}
BENCHMARK(BM_DiscretizeInterface)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConditionNumber(benchmark::State& state) {
  auto d = discretize(interface_config(16));
  for (auto _ : state) benchmark::DoNotOptimize(condition_number(d.reduced.system.matrix));
}
BENCHMARK(BM_ConditionNumber)->Unit(benchmark::kMillisecond);

void BM_CgSolve(benchmark::State& state) {
  auto d = discretize(interface_config(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(cg_solve(d.reduced.system.matrix, d.reduced.system.rhs));
}
BENCHMARK(BM_CgSolve)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
