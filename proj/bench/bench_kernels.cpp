#include <benchmark/benchmark.h>

#include <vector>

#include "q1d/kernels.hpp"

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = 300.0 + 1700.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

q1d::sim::CycleConfig cycle() {
  q1d::sim::CycleConfig c;
  c.gamma = 11.0;
  c.eta_SP = 0.74;
  c.tau_I = 1e-3;
  c.heating_rate = 2.0;
  c.n_initial = 20;
  c.t_max = 20.0;
  c.seed = 7;
  return c;
}

void BM_family_serial(benchmark::State& st) {
  const auto g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(q1d::kernels::evaluate_family_serial(q1d::radiometry::SpectralFamily::q1d_per_lambda,
                                                                  q1d::Temperature::kelvin(5800.0), g));
  }
}

void BM_family_parallel(benchmark::State& st) {
  const auto g = grid(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(q1d::kernels::evaluate_family(q1d::radiometry::SpectralFamily::q1d_per_lambda,
                                                           q1d::Temperature::kelvin(5800.0), g));
  }
}

void BM_ensemble_serial(benchmark::State& st) {
  const auto c = cycle();
  for (auto _ : st) benchmark::DoNotOptimize(q1d::kernels::run_ensemble_serial(c, static_cast<std::size_t>(st.range(0))));
}

void BM_ensemble_parallel(benchmark::State& st) {
  const auto c = cycle();
  for (auto _ : st) benchmark::DoNotOptimize(q1d::kernels::run_ensemble(c, static_cast<std::size_t>(st.range(0))));
}

}  // namespace

BENCHMARK(BM_family_serial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_family_parallel)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_ensemble_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_ensemble_parallel)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
