#include "irrev/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "irrev/error.hpp"

namespace irrev {
namespace {

// Ys on raw counts; exact when the smaller count is 0, since a*a/a == a for
// counts below 2^26.
double ys_counts(std::uint64_t a, std::uint64_t b) {
  const double hi = static_cast<double>(std::max(a, b));
  const double lo = static_cast<double>(std::min(a, b));
  if (hi == 0.0) return 0.0;
  return hi * (hi - lo) / (hi + lo);
}

WindowTransform transform_for(MeasureKind kind) {
  return kind == MeasureKind::TIR ? WindowTransform::time_reverse : WindowTransform::negate;
}

// Visits the union of both supports in ascending key order.
template <typename F>
void for_each_bin(const PatternHistogram& h, const PatternHistogram& g, F&& f) {
  auto a = h.entries().begin(), a_end = h.entries().end();
  auto b = g.entries().begin(), b_end = g.entries().end();
  while (a != a_end || b != b_end) {
    if (b == b_end || (a != a_end && a->first < b->first)) {
      f(a->first, a->second, std::uint64_t{0});
      ++a;
    } else if (a == a_end || b->first < a->first) {
      f(b->first, std::uint64_t{0}, b->second);
      ++b;
    } else {
      f(a->first, a->second, b->second);
      ++a;
      ++b;
    }
  }
}

void check_compatible(const PatternHistogram& forward, const PatternHistogram& transformed,
                      MeasureKind kind) {
  if (forward.transform() != WindowTransform::identity ||
      transformed.transform() != transform_for(kind) ||
      !(forward.config() == transformed.config()) ||
      forward.n_windows() != transformed.n_windows())
    throw Error(ErrorCode::InvalidParams, "histograms do not describe the same measure");
}

double value_of(const PatternHistogram& h, const PatternHistogram& g) {
  double sum = 0.0;
  for_each_bin(h, g, [&](PatternKey, std::uint64_t hc, std::uint64_t gc) {
    sum += ys_counts(hc, gc);
  });
  return sum / (2.0 * static_cast<double>(h.n_windows()));
}

}  // namespace

std::string_view to_string(MeasureKind kind) { return kind == MeasureKind::TIR ? "TIR" : "AIR"; }

MeasureKind measure_kind_from_string(std::string_view text) {
  if (text == "TIR" || text == "tir") return MeasureKind::TIR;
  if (text == "AIR" || text == "air") return MeasureKind::AIR;
  throw Error(ErrorCode::InvalidParams, "unknown measure '" + std::string(text) + "'");
}

double ys_divergence(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
    throw Error(ErrorCode::DomainError, "Ys arguments must lie in [0, 1]");
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (lo == 0.0) return hi;
  return hi * (hi - lo) / (hi + lo);
}

IrreversibilityReport measure_from_histograms(const PatternHistogram& forward,
                                              const PatternHistogram& transformed,
                                              MeasureKind kind) {
  check_compatible(forward, transformed, kind);
  const int m = forward.config().m;
  const double n = static_cast<double>(forward.n_windows());

  IrreversibilityReport report;
  report.kind = kind;
  report.config = forward.config();
  report.n_windows = forward.n_windows();
  report.value = value_of(forward, transformed);

  for (const auto& [key, count] : forward.entries()) {
    ++report.n_observed_patterns;
    if (transformed.count(key) == 0) ++report.n_forbidden_counterparts;
  }

  // Pair each bin with its symmetric counterpart where the pattern-level map
  // exists and agrees with the transformed histogram; otherwise report the
  // bin on its own. Entries sum to the value either way.
  std::vector<PatternKey> paired;
  for_each_bin(forward, transformed, [&](PatternKey key, std::uint64_t hc, std::uint64_t gc) {
    if (std::binary_search(paired.begin(), paired.end(), key)) return;
    const Pattern pattern = Pattern::from_key(key, m);

    std::optional<Pattern> partner;
    if (kind == MeasureKind::AIR)
      partner = amplitude_reverse(pattern);
    else if (!pattern.has_ties())
      partner = time_reverse_tie_free(pattern);

    if (partner) {
      const PatternKey pk = partner->key();
      const std::uint64_t partner_h = forward.count(pk);
      const std::uint64_t partner_g = transformed.count(pk);
      if (gc == partner_h && partner_g == hc) {
        PairContribution c;
        c.pattern = pattern;
        c.counterpart = partner;
        c.p_forward = static_cast<double>(hc) / n;
        c.p_counterpart = static_cast<double>(partner_h) / n;
        c.ys = pk == key ? 0.0 : ys_counts(hc, partner_h) / n;
        report.pairs.push_back(c);
        if (pk != key) paired.insert(std::upper_bound(paired.begin(), paired.end(), pk), pk);
        return;
      }
    }
    PairContribution c;
    c.pattern = pattern;
    c.p_forward = static_cast<double>(hc) / n;
    c.p_counterpart = static_cast<double>(gc) / n;
    c.ys = ys_counts(hc, gc) / (2.0 * n);
    report.pairs.push_back(c);
  });
  return report;
}

IrreversibilityReport measure(std::span<const double> series, const EmbeddingConfig& config,
                              MeasureKind kind) {
  const auto forward = build_histogram(series, config, WindowTransform::identity);
  const auto transformed = build_histogram(series, config, transform_for(kind));
  return measure_from_histograms(forward, transformed, kind);
}

double measure_value(std::span<const double> series, const EmbeddingConfig& config,
                     MeasureKind kind) {
  const auto forward = build_histogram(series, config, WindowTransform::identity);
  const auto transformed = build_histogram(series, config, transform_for(kind));
  return value_of(forward, transformed);
}

IntRange IntRange::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw Error(ErrorCode::InvalidParams, "malformed range '" + std::string(text) + "'");
    return v;
  };
  IntRange r;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    r.first = parse_int(text.substr(0, dots));
    r.last = parse_int(text.substr(dots + 2));
  } else {
    r.first = r.last = parse_int(text);
  }
  if (r.last < r.first)
    throw Error(ErrorCode::InvalidParams, "empty range '" + std::string(text) + "'");
  return r;
}

std::vector<IrreversibilityReport> sweep(std::span<const double> series, IntRange m_range,
                                         IntRange tau_range, TieScheme scheme,
                                         std::span<const MeasureKind> kinds, double tie_epsilon) {
  std::vector<IrreversibilityReport> out;
  out.reserve(kinds.size() * m_range.size() * tau_range.size());
  for (MeasureKind kind : kinds) {
    for (int m = m_range.first; m <= m_range.last; ++m) {
      for (int tau = tau_range.first; tau <= tau_range.last; ++tau) {
        const EmbeddingConfig config{m, tau, scheme, tie_epsilon};
        try {
          out.push_back(measure(series, config, kind));
        } catch (const Error& e) {
          throw Error(e.code(), "cell (" + std::string(to_string(kind)) + ", m=" +
                                    std::to_string(m) + ", tau=" + std::to_string(tau) +
                                    "): " + e.what());
        }
      }
    }
  }
  return out;
}

}  // namespace irrev
