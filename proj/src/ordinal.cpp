#include "irrev/ordinal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "irrev/detail/pattern_kernel.hpp"
#include "irrev/error.hpp"

namespace irrev {

std::string_view to_string(TieScheme scheme) {
  return scheme == TieScheme::original ? "original" : "equal-value";
}

TieScheme tie_scheme_from_string(std::string_view text) {
  if (text == "original") return TieScheme::original;
  if (text == "equal-value" || text == "equal_value") return TieScheme::equal_value;
  throw Error(ErrorCode::InvalidParams, "unknown tie scheme '" + std::string(text) + "'");
}

void EmbeddingConfig::validate() const {
  if (m < 2 || m > kMaxDimension)
    throw Error(ErrorCode::InvalidParams,
                "dimension m=" + std::to_string(m) + " outside [2, 16]");
  if (tau < 1) throw Error(ErrorCode::InvalidParams, "delay tau must be >= 1");
  if (!(tie_epsilon >= 0.0) || !std::isfinite(tie_epsilon))
    throw Error(ErrorCode::InvalidParams, "tie epsilon must be finite and >= 0");
}

std::size_t EmbeddingConfig::window_count(std::size_t n) const {
  const std::size_t span = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau);
  return n > span ? n - span : 0;
}

Pattern::Pattern(std::span<const int> labels) {
  const auto m = static_cast<int>(labels.size());
  if (m < 2 || m > kMaxDimension)
    throw Error(ErrorCode::InvalidPattern,
                "pattern length " + std::to_string(m) + " outside [2, 16]");
  for (int i = 0; i < m; ++i) {
    const int v = labels[static_cast<std::size_t>(i)];
    if (v < 1 || v > m)
      throw Error(ErrorCode::InvalidPattern,
                  "label " + std::to_string(v) + " out of range for m=" + std::to_string(m));
    labels_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  }
  size_ = static_cast<std::uint8_t>(m);
}

Pattern::Pattern(std::initializer_list<int> labels)
    : Pattern(std::span<const int>(labels.begin(), labels.size())) {}

Pattern Pattern::from_key(PatternKey key, int m) {
  Pattern p;
  p.size_ = static_cast<std::uint8_t>(m);
  for (int i = m - 1; i >= 0; --i) {
    p.labels_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((key & 0xF) + 1);
    key >>= 4;
  }
  return p;
}

std::vector<int> Pattern::labels() const {
  return {labels_.begin(), labels_.begin() + size_};
}

PatternKey Pattern::key() const noexcept {
  PatternKey key = 0;
  for (int i = 0; i < size_; ++i) key = (key << 4) | static_cast<PatternKey>(labels_[i] - 1);
  return key;
}

bool Pattern::has_ties() const noexcept {
  std::uint32_t seen = 0;
  for (int i = 0; i < size_; ++i) {
    const std::uint32_t bit = 1u << labels_[i];
    if (seen & bit) return true;
    seen |= bit;
  }
  return false;
}

Pattern extract_pattern(std::span<const double> window, const EmbeddingConfig& config) {
  config.validate();
  if (window.size() != static_cast<std::size_t>(config.m))
    throw Error(ErrorCode::LengthMismatch, "window has " + std::to_string(window.size()) +
                                               " samples, expected m=" +
                                               std::to_string(config.m));
  for (double v : window)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteSample, "window contains NaN/inf");
  return Pattern::from_key(
      detail::pattern_key(window.data(), config.m, config.scheme, config.tie_epsilon), config.m);
}

Pattern amplitude_reverse(const Pattern& pattern) {
  auto labels = pattern.labels();
  std::reverse(labels.begin(), labels.end());
  return Pattern(labels);
}

Pattern time_reverse_tie_free(const Pattern& pattern) {
  if (pattern.has_ties())
    throw Error(ErrorCode::TiedPatternUnsupported,
                "time reversal of tied pattern " + pattern_to_string(pattern) +
                    " is ambiguous; use the dual-histogram measure");
  auto labels = pattern.labels();
  const int m = pattern.size();
  for (int& v : labels) v = m + 1 - v;
  return Pattern(labels);
}

bool is_self_symmetric(const Pattern& pattern, Symmetry symmetry) {
  if (symmetry == Symmetry::amplitude) return amplitude_reverse(pattern) == pattern;
  return time_reverse_tie_free(pattern) == pattern;
}

std::vector<double> canonical_representative(const Pattern& pattern) {
  const int m = pattern.size();
  if (m < 2) throw Error(ErrorCode::InvalidPattern, "empty pattern");

  struct Run {
    int label;
    int length;
    std::vector<int> members;
  };
  std::vector<Run> runs;
  std::vector<bool> claimed(static_cast<std::size_t>(m + 1), false);
  for (int i = 0; i < m;) {
    const int label = pattern[i];
    int j = i + 1;
    while (j < m && pattern[j] == label) ++j;
    if (claimed[static_cast<std::size_t>(label)])
      throw Error(ErrorCode::InvalidPattern, "label " + std::to_string(label) +
                                                 " appears in two separate runs of " +
                                                 pattern_to_string(pattern));
    claimed[static_cast<std::size_t>(label)] = true;
    runs.push_back({label, j - i, {label}});
    i = j;
  }

  // Every unclaimed position joins a run whose label is below it. The
  // candidate runs for position p form a prefix (by label) that grows with p,
  // so assigning positions in ascending order to any open candidate succeeds
  // whenever any assignment does.
  std::vector<Run*> by_label;
  for (auto& r : runs) by_label.push_back(&r);
  std::sort(by_label.begin(), by_label.end(),
            [](const Run* a, const Run* b) { return a->label < b->label; });
  for (int pos = 1; pos <= m; ++pos) {
    if (claimed[static_cast<std::size_t>(pos)]) continue;
    Run* target = nullptr;
    for (Run* r : by_label) {
      if (r->label >= pos) break;
      if (static_cast<int>(r->members.size()) < r->length) {
        target = r;
        break;
      }
    }
    if (target == nullptr)
      throw Error(ErrorCode::InvalidPattern, "no window realises " + pattern_to_string(pattern) +
                                                 " (position " + std::to_string(pos) +
                                                 " cannot join any tie group)");
    target->members.push_back(pos);
  }

  std::vector<double> window(static_cast<std::size_t>(m), 0.0);
  for (std::size_t k = 0; k < runs.size(); ++k)
    for (int pos : runs[k].members) window[static_cast<std::size_t>(pos - 1)] = double(k + 1);
  return window;
}

std::string pattern_to_string(const Pattern& pattern) {
  std::string out;
  for (int i = 0; i < pattern.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(pattern[i]);
  }
  return out;
}

Pattern pattern_from_string(std::string_view text) {
  std::vector<int> labels;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  if (p == end) throw Error(ErrorCode::ParseError, "empty pattern text");
  while (true) {
    int value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || next == p || *p == '-' || *p == '+')
      throw Error(ErrorCode::ParseError, "malformed pattern text '" + std::string(text) + "'");
    labels.push_back(value);
    p = next;
    if (p == end) break;
    if (*p != ',' || p + 1 == end)
      throw Error(ErrorCode::ParseError, "malformed pattern text '" + std::string(text) + "'");
    ++p;
  }
  Pattern pattern(labels);
  canonical_representative(pattern);
  return pattern;
}

}  // namespace irrev
