#include <omp.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "irrev/detail/pattern_kernel.hpp"
#include "irrev/error.hpp"
#include "irrev/measures.hpp"

namespace irrev {
namespace {

using CountMap = std::unordered_map<PatternKey, std::uint64_t>;

// Below this many windows the thread start-up costs more than it saves.
constexpr std::size_t kParallelThreshold = 1 << 14;

std::size_t checked_window_count(std::span<const double> series, const EmbeddingConfig& config) {
  config.validate();
  const std::size_t windows = config.window_count(series.size());
  if (windows == 0)
    throw Error(ErrorCode::SeriesTooShort,
                "series of length " + std::to_string(series.size()) + " needs at least " +
                    std::to_string((config.m - 1) * config.tau + 1) + " samples for m=" +
                    std::to_string(config.m) + ", tau=" + std::to_string(config.tau));
  for (std::size_t i = 0; i < series.size(); ++i)
    if (!std::isfinite(series[i]))
      throw Error(ErrorCode::NonFiniteSample, "sample " + std::to_string(i + 1) + " is not finite");
  return windows;
}

void accumulate(std::span<const double> series, const EmbeddingConfig& config,
                WindowTransform transform, std::size_t begin, std::size_t end, CountMap& counts) {
  const int m = config.m;
  const auto tau = static_cast<std::size_t>(config.tau);
  double window[kMaxDimension];
  for (std::size_t i = begin; i < end; ++i) {
    const double* x = series.data() + i;
    switch (transform) {
      case WindowTransform::identity:
        for (int k = 0; k < m; ++k) window[k] = x[k * tau];
        break;
      case WindowTransform::time_reverse:
        for (int k = 0; k < m; ++k) window[k] = x[(m - 1 - k) * tau];
        break;
      case WindowTransform::negate:
        for (int k = 0; k < m; ++k) window[k] = -x[k * tau];
        break;
    }
    ++counts[detail::pattern_key(window, m, config.scheme, config.tie_epsilon)];
  }
}

PatternHistogram finish(const EmbeddingConfig& config, WindowTransform transform,
                        const CountMap& counts, std::size_t windows) {
  std::vector<PatternHistogram::Entry> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  return PatternHistogram(config, transform, std::move(sorted), windows);
}

void merge_into(CountMap& total, const CountMap& part) {
  for (const auto& [key, count] : part) total[key] += count;
}

}  // namespace

PatternHistogram::PatternHistogram(EmbeddingConfig config, WindowTransform transform,
                                   std::vector<Entry> sorted_counts, std::uint64_t n_windows)
    : config_(config),
      transform_(transform),
      counts_(std::move(sorted_counts)),
      n_windows_(n_windows) {}

std::uint64_t PatternHistogram::count(PatternKey key) const noexcept {
  auto it = std::lower_bound(counts_.begin(), counts_.end(), key,
                             [](const Entry& e, PatternKey k) { return e.first < k; });
  return it != counts_.end() && it->first == key ? it->second : 0;
}

double PatternHistogram::probability(const Pattern& pattern) const noexcept {
  if (pattern.size() != config_.m || n_windows_ == 0) return 0.0;
  return static_cast<double>(count(pattern)) / static_cast<double>(n_windows_);
}

PatternHistogram build_histogram_serial(std::span<const double> series,
                                        const EmbeddingConfig& config, WindowTransform transform) {
  const std::size_t windows = checked_window_count(series, config);
  CountMap counts;
  accumulate(series, config, transform, 0, windows, counts);
  return finish(config, transform, counts, windows);
}

PatternHistogram build_histogram_chunked(std::span<const double> series,
                                         const EmbeddingConfig& config,
                                         WindowTransform transform, std::size_t chunks) {
  const std::size_t windows = checked_window_count(series, config);
  chunks = std::clamp<std::size_t>(chunks, 1, windows);
  CountMap total;
  for (std::size_t c = 0; c < chunks; ++c) {
    CountMap part;
    accumulate(series, config, transform, windows * c / chunks, windows * (c + 1) / chunks, part);
    merge_into(total, part);
  }
  return finish(config, transform, total, windows);
}

PatternHistogram build_histogram(std::span<const double> series, const EmbeddingConfig& config,
                                 WindowTransform transform) {
  const std::size_t windows = checked_window_count(series, config);
  const int max_threads = omp_get_max_threads();
  if (windows < kParallelThreshold || max_threads == 1 || omp_in_parallel()) {
    CountMap counts;
    accumulate(series, config, transform, 0, windows, counts);
    return finish(config, transform, counts, windows);
  }

  std::vector<CountMap> partial(static_cast<std::size_t>(max_threads));
#pragma omp parallel num_threads(max_threads)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    accumulate(series, config, transform, windows * t / nt, windows * (t + 1) / nt, partial[t]);
  }
  CountMap total = std::move(partial.front());
  for (std::size_t t = 1; t < partial.size(); ++t) merge_into(total, partial[t]);
  return finish(config, transform, total, windows);
}

}  // namespace irrev
