// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "irrev/measures.hpp"
#include "irrev/models.hpp"
#include "irrev/surrogate.hpp"

namespace {

const std::vector<double>& logistic_series() {
  static const auto series = [] {
    irrev::ModelSpec spec;
    spec.kind = irrev::ModelKind::logistic;
    spec.n = irrev::reference_length();
    return irrev::generate(spec);
  }();
  return series;
}

void BM_HistogramSerial(benchmark::State& state) {
  const irrev::EmbeddingConfig config{static_cast<int>(state.range(0)), 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irrev::build_histogram_serial(logistic_series(), config, irrev::WindowTransform::identity));
}
BENCHMARK(BM_HistogramSerial)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

void BM_HistogramParallel(benchmark::State& state) {
  const irrev::EmbeddingConfig config{static_cast<int>(state.range(0)), 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irrev::build_histogram(logistic_series(), config, irrev::WindowTransform::identity));
}
BENCHMARK(BM_HistogramParallel)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

void BM_RankOrderRadix(benchmark::State& state) {
  const auto& x = logistic_series();
  std::vector<double> sorted(x), out(x.size());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint32_t> order;
  for (auto _ : state) {
    irrev::rank_order(x, sorted, out, order);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_RankOrderRadix)->Unit(benchmark::kMillisecond);

void BM_RankOrderStableSort(benchmark::State& state) {
  const auto& x = logistic_series();
  for (auto _ : state) benchmark::DoNotOptimize(irrev::rank_permutation_reference(x));
}
BENCHMARK(BM_RankOrderStableSort)->Unit(benchmark::kMillisecond);

irrev::IaaftParams ensemble_params(int threads) {
  irrev::IaaftParams p;
  p.seed = 11;
  p.n_surrogates = 8;
  p.threads = threads;
  return p;
}

std::vector<double> tir4(std::span<const double> s) {
  return {irrev::measure_value(s, irrev::EmbeddingConfig{4, 1}, irrev::MeasureKind::TIR)};
}

void BM_EnsembleSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irrev::surrogate_statistics_serial(logistic_series(), ensemble_params(1), tir4));
}
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_EnsembleParallel(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irrev::surrogate_statistics(logistic_series(), ensemble_params(0), tir4));
}
BENCHMARK(BM_EnsembleParallel)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
