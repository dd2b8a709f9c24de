#pragma once

// Pattern histograms and the Ys-based time (TIR) and amplitude (AIR)
// irreversibility measures.
//
// Both measures compare the histogram of forward windows H with a histogram G
// of transformed windows (time-reversed for TIR, negated for AIR):
//
//   value = 1/2 * sum over patterns p of Ys(H(p), G(p))
//
// which for AIR, and for TIR on tie-free data, is the sum of Ys over unordered
// pairs {p, p*} of symmetric counterparts.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "irrev/ordinal.hpp"

namespace irrev {

enum class WindowTransform { identity, time_reverse, negate };
enum class MeasureKind { TIR, AIR };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view text);

class PatternHistogram {
 public:
  using Entry = std::pair<PatternKey, std::uint64_t>;

  PatternHistogram(EmbeddingConfig config, WindowTransform transform,
                   std::vector<Entry> sorted_counts, std::uint64_t n_windows);

  const EmbeddingConfig& config() const noexcept { return config_; }
  WindowTransform transform() const noexcept { return transform_; }
  std::uint64_t n_windows() const noexcept { return n_windows_; }

  /// Non-zero bins in ascending key (lexicographic pattern) order.
  std::span<const Entry> entries() const noexcept { return counts_; }

  std::uint64_t count(PatternKey key) const noexcept;
  std::uint64_t count(const Pattern& pattern) const noexcept { return count(pattern.key()); }
  double probability(const Pattern& pattern) const noexcept;

  friend bool operator==(const PatternHistogram&, const PatternHistogram&) = default;

 private:
  EmbeddingConfig config_;
  WindowTransform transform_;
  std::vector<Entry> counts_;
  std::uint64_t n_windows_;
};

/// OpenMP kernel: window range split across threads, merged by count addition.
/// Throws SeriesTooShort, NonFiniteSample, InvalidParams.
PatternHistogram build_histogram(std::span<const double> series, const EmbeddingConfig& config,
                                 WindowTransform transform);

/// Single-threaded reference for build_histogram.
PatternHistogram build_histogram_serial(std::span<const double> series,
                                        const EmbeddingConfig& config, WindowTransform transform);

/// Accumulates `chunks` disjoint window ranges separately and merges them.
PatternHistogram build_histogram_chunked(std::span<const double> series,
                                         const EmbeddingConfig& config,
                                         WindowTransform transform, std::size_t chunks);

/// p_i (p_i - p_j) / (p_i + p_j) with p_i = max(a, b), p_j = min(a, b);
/// 0 when both are 0. Throws DomainError outside [0, 1].
double ys_divergence(double a, double b);

struct PairContribution {
  Pattern pattern;
  /// Symmetric counterpart, or nullopt for a "same-bin" entry that compares a
  /// pattern's forward probability with its probability in the transformed
  /// histogram (tied patterns under TIR, or inconsistent pairings).
  std::optional<Pattern> counterpart;
  double p_forward = 0.0;
  double p_counterpart = 0.0;
  double ys = 0.0;
};

struct IrreversibilityReport {
  MeasureKind kind = MeasureKind::TIR;
  EmbeddingConfig config;
  double value = 0.0;
  std::vector<PairContribution> pairs;
  std::uint64_t n_observed_patterns = 0;
  std::uint64_t n_forbidden_counterparts = 0;
  std::uint64_t n_windows = 0;
};

IrreversibilityReport measure(std::span<const double> series, const EmbeddingConfig& config,
                              MeasureKind kind);

/// Measure from an identity histogram and the matching transformed one.
IrreversibilityReport measure_from_histograms(const PatternHistogram& forward,
                                              const PatternHistogram& transformed,
                                              MeasureKind kind);

/// Value only; skips the pair decomposition. Used in surrogate ensembles.
double measure_value(std::span<const double> series, const EmbeddingConfig& config,
                     MeasureKind kind);

struct IntRange {
  int first = 0;
  int last = 0;

  /// Parses "a..b" or a single integer.
  static IntRange parse(std::string_view text);
  std::size_t size() const noexcept {
    return last >= first ? static_cast<std::size_t>(last - first + 1) : 0;
  }
};

/// One report per (kind, m, tau), ordered by kind, then m, then tau.
/// Errors are rethrown with the failing cell identified in the message.
std::vector<IrreversibilityReport> sweep(std::span<const double> series, IntRange m_range,
                                         IntRange tau_range, TieScheme scheme,
                                         std::span<const MeasureKind> kinds,
                                         double tie_epsilon = 0.0);

}  // namespace irrev
