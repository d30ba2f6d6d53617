// Serial reference against the OpenMP kernels on the two hot loops.

#include <benchmark/benchmark.h>

#include "altlin/dynamics.hpp"
#include "altlin/lagrangian.hpp"
#include "altlin/linstruct.hpp"

using namespace altlin;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel; }

void BM_AxiomReport(benchmark::State& state) {
  const auto l = linstruct::catalog_make("sphere");
  linstruct::AxiomOptions opt;
  opt.samples = 1000;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(linstruct::ls_axiom_report(l, opt));
}

void BM_Liouville(benchmark::State& state) {
  const auto l = linstruct::catalog_make("tanh", {2});
  linstruct::LiouvilleOptions opt;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(linstruct::liouville_report(l, opt));
}

void BM_Darboux(benchmark::State& state) {
  const auto l = lagrangian::lagrangian_make("magnetic-general");
  lagrangian::DarbouxOptions opt;
  opt.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(lagrangian::darboux_check(l, opt));
}

void BM_ExactTrajectory(benchmark::State& state) {
  std::vector<double> grid(20000);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 1e-3 * static_cast<double>(k);
  const dynamics::Vector4 s(1.0, 0.0, 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::exact_trajectory(1.0, s, grid, mode(state)));
}

}  // namespace

// arg 0 is the serial reference, 1 the parallel kernel
BENCHMARK(BM_AxiomReport)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Liouville)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Darboux)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactTrajectory)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
