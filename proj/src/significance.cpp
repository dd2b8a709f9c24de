#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "irrev/error.hpp"
#include "irrev/surrogate.hpp"

namespace irrev {
namespace {

int team_size(const IaaftParams& params) {
  return params.threads > 0 ? params.threads : omp_get_max_threads();
}

// Runs body(i) for i in [0, count) on `threads` threads; the first exception
// thrown by any iteration is rethrown afterwards.
template <typename Body>
void parallel_indices(int count, int threads, Body&& body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(irrev_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<std::vector<double>> surrogate_statistics(const IaaftGenerator& generator,
                                                      const IaaftParams& params,
                                                      const SurrogateStatistic& statistic) {
  params.validate();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(params.n_surrogates));
  parallel_indices(params.n_surrogates, team_size(params), [&](int i) {
    const auto s = generator.generate(params.seed, static_cast<std::uint64_t>(i),
                                      params.max_iterations);
    out[static_cast<std::size_t>(i)] = statistic(s.series);
  });
  return out;
}

std::vector<std::vector<double>> surrogate_statistics(std::span<const double> series,
                                                      const IaaftParams& params,
                                                      const SurrogateStatistic& statistic) {
  params.validate();
  const IaaftGenerator generator(series);
  return surrogate_statistics(generator, params, statistic);
}

std::vector<std::vector<double>> surrogate_statistics_serial(std::span<const double> series,
                                                             const IaaftParams& params,
                                                             const SurrogateStatistic& statistic) {
  params.validate();
  const IaaftGenerator generator(series);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(params.n_surrogates));
  for (int i = 0; i < params.n_surrogates; ++i) {
    const auto s =
        generator.generate(params.seed, static_cast<std::uint64_t>(i), params.max_iterations);
    out.push_back(statistic(s.series));
  }
  return out;
}

std::vector<Surrogate> generate_ensemble(std::span<const double> series,
                                         const IaaftParams& params) {
  params.validate();
  const IaaftGenerator generator(series);
  std::vector<Surrogate> out(static_cast<std::size_t>(params.n_surrogates));
  parallel_indices(params.n_surrogates, team_size(params), [&](int i) {
    out[static_cast<std::size_t>(i)] =
        generator.generate(params.seed, static_cast<std::uint64_t>(i), params.max_iterations);
  });
  return out;
}

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "percentile of an empty list");
  if (!(q > 0.0 && q < 100.0))
    throw Error(ErrorCode::DomainError, "percentile q must lie in (0, 100)");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // q * N / 100 keeps common cases (q = 2.5, 97.5) exact.
  auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

SurrogateVerdict make_verdict(MeasureKind kind, const EmbeddingConfig& config,
                              const IaaftParams& params, double original_value,
                              std::vector<double> surrogate_values) {
  SurrogateVerdict v;
  v.kind = kind;
  v.config = config;
  v.seed = params.seed;
  v.max_iterations = params.max_iterations;
  v.original_value = original_value;
  v.p2_5 = percentile_nearest_rank(surrogate_values, 2.5);
  v.p97_5 = percentile_nearest_rank(surrogate_values, 97.5);
  v.surrogate_values = std::move(surrogate_values);
  v.significant_above = original_value > v.p97_5;
  v.significant_below = original_value < v.p2_5;
  return v;
}

std::vector<SurrogateVerdict> significance_tests(std::span<const double> series,
                                                 std::span<const MeasureCell> cells,
                                                 const IaaftParams& params) {
  params.validate();
  const IaaftGenerator generator(series);
  std::vector<double> originals;
  for (const auto& cell : cells) originals.push_back(measure_value(series, cell.config, cell.kind));

  const auto stats = surrogate_statistics(generator, params, [&](std::span<const double> s) {
    std::vector<double> values;
    values.reserve(cells.size());
    for (const auto& cell : cells) values.push_back(measure_value(s, cell.config, cell.kind));
    return values;
  });

  std::vector<SurrogateVerdict> verdicts;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> column;
    column.reserve(stats.size());
    for (const auto& row : stats) column.push_back(row[c]);
    verdicts.push_back(make_verdict(cells[c].kind, cells[c].config, params, originals[c],
                                    std::move(column)));
  }
  return verdicts;
}

SurrogateVerdict significance_test(std::span<const double> series, const EmbeddingConfig& config,
                                   MeasureKind kind, const IaaftParams& params) {
  const MeasureCell cell{config, kind};
  return significance_tests(series, std::span(&cell, 1), params).front();
}

}  // namespace irrev
