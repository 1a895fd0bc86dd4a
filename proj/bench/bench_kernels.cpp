// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>

#include "phasestab/kernels.hpp"
#include "phasestab/linalg.hpp"

using namespace phasestab;
using namespace phasestab::kernels;

namespace {

CMatrix gaussian_synthesis(Index dim, Index count, ScalarField field) {
  Rng rng(7);
  CMatrix s(dim, count);
  for (Index n = 0; n < count; ++n) s.col(n) = random_gaussian(dim, field, rng);
  return s;
}

template <SplitScan (*Scan)(const CMatrix&, ScalarField)>
void BM_SplitScan(benchmark::State& state) {
  const Index count = state.range(0);
  const CMatrix s = gaussian_synthesis(3, count, ScalarField::real);
  for (auto _ : state) benchmark::DoNotOptimize(Scan(s, ScalarField::real));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (count - 1)));
}
BENCHMARK(BM_SplitScan<scan_splits_serial>)->Name("split_scan/serial")->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SplitScan<scan_splits_parallel>)->Name("split_scan/parallel")->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);

// The sinc cross-tail summand, the typical certified-series workload.
double sinc_term(Index i) {
  const double x = (static_cast<double>(i) + 0.5) * std::numbers::pi / 4.0;
  const double s = std::sin(x) / x;
  return s * s;
}

template <double (*Sum)(Index, const std::function<double(Index)>&)>
void BM_ChunkedSum(benchmark::State& state) {
  const std::function<double(Index)> term = [](Index i) { return sinc_term(i); };
  for (auto _ : state) benchmark::DoNotOptimize(Sum(state.range(0), term));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ChunkedSum<chunked_sum_serial>)->Name("chunked_sum/serial")->Range(1 << 16, 1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChunkedSum<chunked_sum_parallel>)->Name("chunked_sum/parallel")->Range(1 << 16, 1 << 22)->Unit(benchmark::kMillisecond);

template <ArgMin (*Min)(Index, const std::function<double(Index)>&)>
void BM_ArgMin(benchmark::State& state) {
  const std::function<double(Index)> value = [](Index i) { return std::cos(0.001 * static_cast<double>(i)) + 1e-9 * static_cast<double>(i % 97); };
  for (auto _ : state) benchmark::DoNotOptimize(Min(state.range(0), value));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ArgMin<argmin_serial>)->Name("argmin/serial")->Range(1 << 16, 1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArgMin<argmin_parallel>)->Name("argmin/parallel")->Range(1 << 16, 1 << 22)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
