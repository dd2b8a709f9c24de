#pragma once

// IAAFT surrogates (iterative amplitude-adjusted Fourier transform) and
// percentile significance tests against a surrogate ensemble.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "irrev/measures.hpp"

namespace irrev {

struct IaaftParams {
  int max_iterations = 1000;
  std::uint64_t seed = 0;
  int n_surrogates = 500;
  /// OpenMP threads for ensembles; 0 uses the runtime default.
  int threads = 0;

  void validate() const;
};

struct IaaftDiagnostics {
  int iterations_used = 0;
  /// Relative RMS magnitude-spectrum error of the returned series.
  double spectrum_rms_error = 0.0;
  bool converged = false;
  /// Error after each rank-ordering step, first to last.
  std::vector<double> error_history;
};

struct Surrogate {
  std::vector<double> series;
  IaaftDiagnostics diagnostics;
};

/// sqrt(sum (|C_k| - |X_k|)^2 / sum |X_k|^2) over the real-input DFT bins of
/// candidate C and reference X (equal lengths).
double relative_spectrum_error(std::span<const double> candidate,
                               std::span<const double> reference);

/// Precomputes the reference amplitudes and spectrum once; generate() may be
/// called concurrently.
class IaaftGenerator {
 public:
  /// Throws TooShort (n < 8), NonFiniteSample, DegenerateSeries (constant).
  explicit IaaftGenerator(std::span<const double> series);
  ~IaaftGenerator();
  IaaftGenerator(const IaaftGenerator&) = delete;
  IaaftGenerator& operator=(const IaaftGenerator&) = delete;

  /// Surrogate `index`, seeded from derive_seed(seed, index).
  Surrogate generate(std::uint64_t seed, std::uint64_t index, int max_iterations) const;

  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  struct Plans;
  std::vector<double> original_;
  std::vector<double> sorted_;
  std::vector<double> magnitudes_;
  double dc_ = 0.0;
  Plans* plans_ = nullptr;
};

Surrogate iaaft(std::span<const double> series, const IaaftParams& params, std::uint64_t index);

/// Rank-order step: result[i] = sorted_values[rank of shaped[i]], ranks by
/// ascending value with ties broken by index. Writes the rank order into
/// `order` (order[r] = index holding rank r).
void rank_order(std::span<const double> shaped, std::span<const double> sorted_values,
                std::span<double> result, std::vector<std::uint32_t>& order);

/// std::stable_sort reference for rank_order's permutation.
std::vector<std::uint32_t> rank_permutation_reference(std::span<const double> values);

using SurrogateStatistic = std::function<std::vector<double>(std::span<const double>)>;

/// statistic(surrogate i) for i in [0, n_surrogates), in index order.
/// OpenMP-parallel over surrogates with params.threads.
std::vector<std::vector<double>> surrogate_statistics(std::span<const double> series,
                                                      const IaaftParams& params,
                                                      const SurrogateStatistic& statistic);

std::vector<std::vector<double>> surrogate_statistics(const IaaftGenerator& generator,
                                                      const IaaftParams& params,
                                                      const SurrogateStatistic& statistic);

/// Single-threaded reference for surrogate_statistics.
std::vector<std::vector<double>> surrogate_statistics_serial(std::span<const double> series,
                                                             const IaaftParams& params,
                                                             const SurrogateStatistic& statistic);

/// All n_surrogates surrogates in index order (parallel).
std::vector<Surrogate> generate_ensemble(std::span<const double> series,
                                         const IaaftParams& params);

/// Element at 1-based rank ceil(q/100 * N) of the ascending values. Throws
/// EmptyInput; q must lie in (0, 100).
double percentile_nearest_rank(std::vector<double> values, double q);

struct SurrogateVerdict {
  MeasureKind kind = MeasureKind::TIR;
  EmbeddingConfig config;
  std::uint64_t seed = 0;
  int max_iterations = 0;
  double original_value = 0.0;
  std::vector<double> surrogate_values;
  double p2_5 = 0.0;
  double p97_5 = 0.0;
  bool significant_above = false;
  bool significant_below = false;
};

SurrogateVerdict make_verdict(MeasureKind kind, const EmbeddingConfig& config,
                              const IaaftParams& params, double original_value,
                              std::vector<double> surrogate_values);

SurrogateVerdict significance_test(std::span<const double> series, const EmbeddingConfig& config,
                                   MeasureKind kind, const IaaftParams& params);

struct MeasureCell {
  EmbeddingConfig config;
  MeasureKind kind;
};

/// Several measures tested against one shared surrogate ensemble.
std::vector<SurrogateVerdict> significance_tests(std::span<const double> series,
                                                 std::span<const MeasureCell> cells,
                                                 const IaaftParams& params);

}  // namespace irrev
