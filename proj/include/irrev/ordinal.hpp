#pragma once

// Ordinal patterns of embedded windows, under the original scheme (ties broken
// by occurrence) and the equal-value scheme (every member of a tie group is
// labelled with the group's lowest position). Labels are 1-based positions.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irrev {

inline constexpr int kMaxDimension = 16;

enum class TieScheme { original, equal_value };

std::string_view to_string(TieScheme scheme);
TieScheme tie_scheme_from_string(std::string_view text);

struct EmbeddingConfig {
  int m = 3;
  int tau = 1;
  TieScheme scheme = TieScheme::equal_value;
  /// Two samples are tied iff |a - b| <= tie_epsilon; grouping is transitive
  /// along the sorted order.
  double tie_epsilon = 0.0;

  /// Throws InvalidParams unless 2 <= m <= kMaxDimension, tau >= 1, epsilon >= 0.
  void validate() const;

  /// Number of windows in a series of length n, or 0 if n is too short.
  std::size_t window_count(std::size_t n) const;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// Packed pattern: 4 bits per (label - 1), first label in the most significant
/// used nibble, so integer order equals lexicographic label order for fixed m.
using PatternKey = std::uint64_t;

class Pattern {
 public:
  Pattern() = default;
  /// Checks syntax only (2 <= m <= 16, labels in 1..m); use
  /// canonical_representative() to check that some window realises it.
  explicit Pattern(std::span<const int> labels);
  Pattern(std::initializer_list<int> labels);

  static Pattern from_key(PatternKey key, int m);

  int size() const noexcept { return size_; }
  int operator[](int i) const noexcept { return labels_[static_cast<std::size_t>(i)]; }
  std::vector<int> labels() const;
  PatternKey key() const noexcept;

  /// True when some label repeats (only possible under the equal-value scheme).
  bool has_ties() const noexcept;

  friend bool operator==(const Pattern& a, const Pattern& b) noexcept {
    return a.size_ == b.size_ && a.labels_ == b.labels_;
  }
  friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) noexcept {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.labels_ <=> b.labels_;
  }

 private:
  std::array<std::uint8_t, kMaxDimension> labels_{};
  std::uint8_t size_ = 0;
};

/// Pattern of a single window of length config.m.
/// Throws LengthMismatch or NonFiniteSample.
Pattern extract_pattern(std::span<const double> window, const EmbeddingConfig& config);

/// Label-sequence reversal: the pattern of the negated window.
Pattern amplitude_reverse(const Pattern& pattern);

/// Positional complement (m + 1 - label): the pattern of the time-reversed
/// window. Only defined for tie-free patterns; throws TiedPatternUnsupported.
Pattern time_reverse_tie_free(const Pattern& pattern);

enum class Symmetry { amplitude, time };

bool is_self_symmetric(const Pattern& pattern, Symmetry symmetry);

/// Integer-valued window whose equal-value pattern is `pattern`.
/// Throws InvalidPattern when no window realises the label sequence.
std::vector<double> canonical_representative(const Pattern& pattern);

/// "l1,l2,...,lm", ASCII, no spaces.
std::string pattern_to_string(const Pattern& pattern);

/// Inverse of pattern_to_string. Throws ParseError on malformed text and
/// InvalidPattern on out-of-range or unrealisable label sequences.
Pattern pattern_from_string(std::string_view text);

}  // namespace irrev
