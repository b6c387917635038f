// Serial vs OpenMP full-pass kernels on a synthetic logistic instance.

#include <benchmark/benchmark.h>

#include <vector>

#include "gsfw/dataset.hpp"
#include "gsfw/kernels.hpp"
#include "gsfw/rng.hpp"

namespace {

const gsfw::Dataset& instance(std::size_t n) {
  static std::vector<std::pair<std::size_t, gsfw::Dataset>> cache;
  for (const auto& [k, ds] : cache) {
    if (k == n) return ds;
  }
  cache.emplace_back(n, gsfw::synth_dataset(n, 112, 0.2, gsfw::LossKind::kLogistic, 1));
  return cache.back().second;
}

std::vector<double> random_vector(std::size_t m, std::uint64_t seed) {
  gsfw::Rng rng(seed);
  std::vector<double> v(m);
  for (double& x : v) x = rng.normal();
  return v;
}

template <void (*Kernel)(const gsfw::Dataset&, std::span<const double>, std::span<double>)>
void bm_predict(benchmark::State& state) {
  const auto& ds = instance(static_cast<std::size_t>(state.range(0)));
  const auto beta = random_vector(ds.p(), 2);
  std::vector<double> out(ds.n());
  for (auto _ : state) {
    Kernel(ds, beta, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ds.nnz()));
}

template <void (*Kernel)(const gsfw::Dataset&, std::span<const double>, std::span<double>)>
void bm_weighted_columns(benchmark::State& state) {
  const auto& ds = instance(static_cast<std::size_t>(state.range(0)));
  const auto w = random_vector(ds.n(), 3);
  std::vector<double> out(ds.p());
  for (auto _ : state) {
    Kernel(ds, w, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ds.nnz()));
}

}  // namespace

BENCHMARK(bm_predict<gsfw::kernels::serial::predict>)->Name("predict/serial")->Arg(8124)->Arg(100000);
BENCHMARK(bm_predict<gsfw::kernels::parallel::predict>)->Name("predict/parallel")->Arg(8124)->Arg(100000);
BENCHMARK(bm_weighted_columns<gsfw::kernels::serial::weighted_columns>)
    ->Name("weighted_columns/serial")
    ->Arg(8124)
    ->Arg(100000);
BENCHMARK(bm_weighted_columns<gsfw::kernels::parallel::weighted_columns>)
    ->Name("weighted_columns/parallel")
    ->Arg(8124)
    ->Arg(100000);

BENCHMARK_MAIN();
