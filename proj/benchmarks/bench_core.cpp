#include <benchmark/benchmark.h>

#include <numbers>

#include "modlab/atoms.hpp"
#include "modlab/occupation.hpp"
#include "modlab/path.hpp"
#include "modlab/resonance.hpp"
#include "modlab/spectral.hpp"

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void BM_BrownianPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(modlab::make_brownian_path(1.0, n, seed++));
}
BENCHMARK(BM_BrownianPath)->Arg(1 << 12)->Arg(1 << 16);

void BM_FbmPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(modlab::make_fbm_path(0.3, 1.0, n, seed++));
}
BENCHMARK(BM_FbmPath)->Arg(1 << 12)->Arg(1 << 16);

void BM_LocalTime(benchmark::State& state) {
  const auto path = modlab::make_brownian_path(1.0, 1 << 16, 7);
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(modlab::local_time(path, {1.0}, bins));
}
BENCHMARK(BM_LocalTime)->Arg(1024)->Arg(8192);

void BM_FourierLocaltime(benchmark::State& state) {
  const auto path = modlab::make_brownian_path(1.0, 1 << 14, 7);
  std::vector<double> xi(static_cast<std::size_t>(state.range(0)));
  for (std::size_t j = 0; j < xi.size(); ++j)
    xi[j] = std::pow(2.0, static_cast<double>(j) / 8.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(modlab::fourier_localtime(path, 1.0, xi));
}
BENCHMARK(BM_FourierLocaltime)->Arg(32)->Arg(96);

void BM_Propagate(benchmark::State& state) {
  const auto f = modlab::random_field(1, static_cast<int>(state.range(0)),
                                      kTwoPi, 1, state.range(0) / 3);
  const auto symbol = modlab::DispersionSymbol::schroedinger();
  double dw = 0;
  for (auto _ : state) {
    dw += 1e-3;
    benchmark::DoNotOptimize(modlab::propagate_linear(f, symbol, dw));
  }
}
BENCHMARK(BM_Propagate)->Arg(256)->Arg(1024);

void BM_NormL4(benchmark::State& state) {
  const auto f = modlab::random_field(1, static_cast<int>(state.range(0)),
                                      kTwoPi, 1, state.range(0) / 3);
  for (auto _ : state) benchmark::DoNotOptimize(modlab::norm_Lq(f, 4.0));
}
BENCHMARK(BM_NormL4)->Arg(256)->Arg(1024);

void BM_VpNorm(benchmark::State& state) {
  const auto p = modlab::random_discrete_path(
      static_cast<std::size_t>(state.range(0)), 4, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(modlab::vp_norm(p, 2.0));
}
BENCHMARK(BM_VpNorm)->Arg(64)->Arg(256);

void BM_RestrictionSum(benchmark::State& state) {
  modlab::RestrictionSumSpec spec;
  spec.constraint = modlab::LatticeConstraint::cubic(1);
  spec.weight_rho = 1.5;
  spec.block_sizes = {8, 8, static_cast<int>(state.range(0)),
                      static_cast<int>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(modlab::restriction_sum_bruteforce(spec));
}
BENCHMARK(BM_RestrictionSum)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
