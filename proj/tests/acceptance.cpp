// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "irrev/error.hpp"
#include "irrev/io.hpp"
#include "irrev/measures.hpp"
#include "irrev/models.hpp"
#include "irrev/ordinal.hpp"
#include "irrev/surrogate.hpp"
#include "oracle.hpp"

using namespace irrev;
namespace fs = std::filesystem;

namespace {

constexpr auto TIR = MeasureKind::TIR;
constexpr auto AIR = MeasureKind::AIR;

// Fixed seeds for the surrogate criterion, chosen before the first run.
constexpr std::uint64_t kGaussianSeed = 1;
constexpr std::uint64_t kSurrogateSeed = 2;
constexpr int kSurrogates = 100;

struct Outcome {
  bool passed = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v) { return format_double(v); }

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EmbeddingConfig cfg(int m, int tau = 1, TieScheme scheme = TieScheme::equal_value) {
  return EmbeddingConfig{m, tau, scheme, 0.0};
}

std::vector<double> model(ModelKind kind, std::size_t n = reference_length()) {
  ModelSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.gaussian.seed = kGaussianSeed;
  return generate(spec);
}

// Gaussian samples where each sample repeats its predecessor with
// probability tie_fraction.
std::vector<double> tied_gaussian(std::mt19937_64& rng, std::size_t n, double tie_fraction) {
  std::normal_distribution<double> gauss;
  std::bernoulli_distribution tie(tie_fraction);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i > 0 && tie(rng)) ? x[i - 1] : gauss(rng);
  return x;
}

std::vector<double> tied_integers(std::mt19937_64& rng, std::size_t n, double tie_fraction) {
  std::uniform_int_distribution<int> value(-50, 50);
  std::bernoulli_distribution tie(tie_fraction);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (i > 0 && tie(rng)) ? x[i - 1] : value(rng);
  return x;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "irrev");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Outcome pattern_fixtures() {
  Outcome o;
  const auto EV = TieScheme::equal_value;
  const auto OR = TieScheme::original;
  auto pat = [](std::vector<double> w, TieScheme s) {
    return extract_pattern(w, cfg(static_cast<int>(w.size()), 1, s));
  };
  int cases = 0;
  auto expect = [&](const Pattern& got, const Pattern& want, const std::string& name) {
    ++cases;
    o.check(got == want, name + " gave " + pattern_to_string(got));
  };
  expect(pat({3, 1, 9, 5, 7}, OR), Pattern{2, 1, 4, 5, 3}, "{3,1,9,5,7} original");
  expect(pat({3, 1, 9, 5, 7}, EV), Pattern{2, 1, 4, 5, 3}, "{3,1,9,5,7} equal-value");
  expect(pat({3, 1, 7, 1, 5}, OR), Pattern{2, 4, 1, 5, 3}, "{3,1,7,1,5} original");
  expect(pat({3, 1, 7, 1, 5}, EV), Pattern{2, 2, 1, 5, 3}, "{3,1,7,1,5} equal-value");
  expect(pat({-3, -1, -7, -1, -5}, EV), Pattern{3, 5, 1, 2, 2}, "{-3,-1,-7,-1,-5} equal-value");
  expect(amplitude_reverse(Pattern{2, 1, 4, 5, 3}), Pattern{3, 5, 4, 1, 2}, "SP of (2,1,4,5,3)");
  expect(pat({-3, -1, -9, -5, -7}, EV), Pattern{3, 5, 4, 1, 2}, "{-3,-1,-9,-5,-7}");
  expect(amplitude_reverse(Pattern{2, 2, 1, 5, 3}), Pattern{3, 5, 1, 2, 2}, "SP of (2,2,1,5,3)");
  expect(time_reverse_tie_free(Pattern{2, 1, 4, 5, 3}), Pattern{4, 5, 2, 1, 3},
         "PSV of (2,1,4,5,3)");
  expect(pat({7, 5, 9, 1, 3}, EV), Pattern{4, 5, 2, 1, 3}, "time-reversed {3,1,9,5,7}");
  expect(time_reverse_tie_free(Pattern{3, 5, 4, 1, 2}), Pattern{3, 1, 2, 5, 4},
         "PSV of (3,5,4,1,2)");

  // Negative control: the original scheme breaks the negation law on ties.
  const auto fwd = pat({3, 1, 7, 1, 5}, OR);
  const auto neg = pat({-3, -1, -7, -1, -5}, OR);
  expect(neg, Pattern{3, 5, 1, 2, 4}, "{-3,-1,-7,-1,-5} original");
  ++cases;
  o.check(neg != amplitude_reverse(fwd) && amplitude_reverse(fwd) == Pattern{3, 5, 1, 4, 2},
          "negative control: (3,5,1,2,4) must differ from reverse((2,4,1,5,3)) = (3,5,1,4,2)");
  o.note(std::to_string(cases) + " cases");
  return o;
}

Outcome dimension_two_identity() {
  Outcome o;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = tied_gaussian(rng, 1000, 0.10);
    for (auto scheme : {TieScheme::equal_value, TieScheme::original}) {
      const double d = std::abs(measure_value(x, cfg(2, 1, scheme), TIR) -
                                measure_value(x, cfg(2, 1, scheme), AIR));
      worst = std::max(worst, d);
    }
  }
  o.check(worst <= 1e-12, "max |TIR-AIR| = " + fmt(worst));
  o.note("200 series x 2 schemes, max |TIR-AIR| = " + fmt(worst));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::vector<double> x(7);
  double worst = 0.0;
  for (int code = 0; code < 2187; ++code) {
    int c = code;
    for (double& v : x) {
      v = 1 + c % 3;
      c /= 3;
    }
    for (auto kind : {TIR, AIR}) {
      const double d = std::abs(measure(x, cfg(3), kind).value -
                                oracle::measure_by_definition(x, cfg(3), kind));
      worst = std::max(worst, d);
    }
  }
  o.check(worst <= 1e-12, "max deviation " + fmt(worst));
  o.note("2187 sequences x 2 measures, max deviation " + fmt(worst));
  return o;
}

Outcome logistic_headline() {
  Outcome o;
  const auto x = model(ModelKind::logistic);
  const double tir = measure_value(x, cfg(7), TIR);
  const double air = measure_value(x, cfg(7), AIR);
  o.check(tir == 1.0, "TIR = " + fmt(tir) + " is not exactly 1");
  o.check(air > 0.0 && air < 1.0, "AIR = " + fmt(air) + " outside (0, 1)");
  o.note("m=7 TIR=" + fmt(tir) + " AIR=" + fmt(air));
  return o;
}

Outcome tir_exceeds_air() {
  Outcome o;
  for (auto kind : {ModelKind::logistic, ModelKind::henon}) {
    const auto x = model(kind);
    const std::string name(to_string(kind));
    for (int m = 3; m <= 5; ++m) {
      const double tir = measure_value(x, cfg(m), TIR);
      const double air = measure_value(x, cfg(m), AIR);
      o.check(tir > air, name + " m=" + std::to_string(m) + " TIR " + fmt(tir) + " <= AIR " +
                             fmt(air));
      o.note(name + " m=" + std::to_string(m) + " " + fmt_short(tir) + ">" + fmt_short(air));
    }
    if (kind == ModelKind::logistic) {
      const double d4 = std::abs(measure_value(x, cfg(4), TIR) - measure_value(x, cfg(4), AIR));
      const double d6 = std::abs(measure_value(x, cfg(6), TIR) - measure_value(x, cfg(6), AIR));
      o.check(d6 <= d4, "logistic gap m=6 " + fmt(d6) + " > gap m=4 " + fmt(d4));
      o.note("logistic gap m=4 " + fmt_short(d4) + ", m=6 " + fmt_short(d6));
    }
  }
  return o;
}

Outcome surrogate_discrimination() {
  Outcome o;
  IaaftParams params;
  params.seed = kSurrogateSeed;
  params.n_surrogates = kSurrogates;
  params.threads = 1;
  const std::vector<MeasureCell> cells{{cfg(4), TIR}, {cfg(4), AIR}};
  for (auto kind : {ModelKind::logistic, ModelKind::henon, ModelKind::gaussian}) {
    const auto x = model(kind);
    const std::string name(to_string(kind));
    for (const auto& v : significance_tests(x, cells, params)) {
      const std::string cell = name + " " + std::string(to_string(v.kind));
      const std::string band =
          fmt_short(v.original_value) + " vs [" + fmt_short(v.p2_5) + ", " + fmt_short(v.p97_5) + "]";
      if (kind == ModelKind::gaussian)
        o.check(!v.significant_above && !v.significant_below, cell + " outside band: " + band);
      else
        o.check(v.significant_above, cell + " not above p97.5: " + band);
      o.note(cell + " " + band);
    }
  }
  o.note("seeds gaussian=" + std::to_string(kGaussianSeed) +
         " surrogates=" + std::to_string(kSurrogateSeed) + ", " + std::to_string(kSurrogates) +
         " surrogates, 1 thread");
  return o;
}

Outcome invariance_suite() {
  Outcome o;
  std::mt19937_64 rng(707);
  double worst = 0.0;
  int cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = trial % 2 ? tied_gaussian(rng, 1500, 0.1) : tied_integers(rng, 1500, 0.1);
    std::vector<double> rev(x.rbegin(), x.rend()), neg(x), aff(x);
    for (double& v : neg) v = -v;
    const double a = 0.5 + trial, b = trial % 3 - 1.0;
    for (double& v : aff) v = a * v + b;
    const int m = 2 + trial % 5;
    const int tau = 1 + trial % 3;
    for (auto scheme : {TieScheme::equal_value, TieScheme::original}) {
      const auto c = cfg(m, tau, scheme);
      const double tir = measure_value(x, c, TIR);
      const double air = measure_value(x, c, AIR);
      const std::string where = " (trial " + std::to_string(trial) + ", " +
                                std::string(to_string(scheme)) + ")";
      auto same = [&](double got, double want, const std::string& law) {
        const double d = std::abs(got - want);
        worst = std::max(worst, d);
        ++cases;
        o.check(d <= 1e-12, law + where + " deviates " + fmt(d));
      };
      same(measure_value(aff, c, TIR), tir, "affine TIR");
      same(measure_value(aff, c, AIR), air, "affine AIR");
      same(measure_value(rev, c, TIR), tir, "reversal TIR");
      same(measure_value(neg, c, AIR), air, "negation AIR");
      if (scheme == TieScheme::equal_value) same(measure_value(neg, c, TIR), tir, "negation TIR");
    }
  }
  o.note(std::to_string(cases) + " identities, max deviation " + fmt(worst));
  return o;
}

Outcome iaaft_properties() {
  Outcome o;
  ModelSpec spec;
  spec.kind = ModelKind::gaussian;
  spec.n = 4096;
  spec.gaussian.seed = kGaussianSeed;
  const auto x = generate(spec);

  IaaftParams params;
  params.seed = kSurrogateSeed;
  params.n_surrogates = 8;
  params.threads = 1;
  const auto one = generate_ensemble(x, params);
  params.threads = 8;
  const auto eight = generate_ensemble(x, params);

  auto sorted_x = x;
  std::sort(sorted_x.begin(), sorted_x.end());
  double worst_error = 0.0;
  bool bitwise = true, same = true;
  for (std::size_t i = 0; i < one.size(); ++i) {
    auto s = one[i].series;
    std::sort(s.begin(), s.end());
    for (std::size_t k = 0; k < s.size(); ++k)
      bitwise = bitwise && std::bit_cast<std::uint64_t>(s[k]) ==
                               std::bit_cast<std::uint64_t>(sorted_x[k]);
    worst_error = std::max(worst_error, relative_spectrum_error(one[i].series, x));
    same = same && one[i].series == eight[i].series;
  }
  // Generation order must not matter either.
  const IaaftGenerator generator(x);
  const auto last = generator.generate(params.seed, one.size() - 1, params.max_iterations);
  same = same && last.series == one.back().series;

  o.check(bitwise, "sorted surrogate differs from sorted original");
  o.check(worst_error <= 1e-2, "spectrum error " + fmt(worst_error) + " > 1e-2");
  o.check(same, "1-thread and 8-thread ensembles differ");
  o.note("8 surrogates, max spectrum error " + fmt_short(worst_error) +
         ", sorted values bitwise equal, 1 vs 8 threads identical");
  return o;
}

Outcome degenerate_handling() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "irrev_acceptance_degenerate";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<double> flat(200, 3.25);
  for (auto scheme : {TieScheme::equal_value, TieScheme::original})
    for (int m = 2; m <= 7; ++m)
      for (auto kind : {TIR, AIR}) {
        const double v = measure_value(flat, cfg(m, 1, scheme), kind);
        o.check(v == 0.0, "constant series " + std::string(to_string(kind)) + " m=" +
                              std::to_string(m) + " = " + fmt(v));
      }

  IaaftParams params;
  params.seed = 1;
  params.n_surrogates = 4;
  o.check(error_of([&] { significance_test(flat, cfg(3), TIR, params); }) ==
              ErrorCode::DegenerateSeries,
          "constant series surrogate test did not raise DegenerateSeries");
  const auto flat_path = (dir / "flat.txt").string();
  write_series(flat, flat_path);
  std::string err;
  const int surrogate_exit =
      cli({"surrogate-test", "--in", flat_path, "--seed", "1", "--n-surrogates", "4"}, &err);
  o.check(surrogate_exit == cli::kExitNumeric && err.find("DegenerateSeries") != std::string::npos,
          "surrogate-test on constant input exited " + std::to_string(surrogate_exit));

  const std::vector<double> four{1, 2, 3, 4};
  o.check(error_of([&] { measure_value(four, cfg(5, 2), TIR); }) == ErrorCode::SeriesTooShort,
          "4 samples at m=5, tau=2 did not raise SeriesTooShort");
  const auto four_path = (dir / "four.txt").string();
  write_series(four, four_path);
  const int short_exit = cli({"analyze", "--in", four_path, "--m", "5", "--tau", "2"}, &err);
  o.check(short_exit == cli::kExitData && err.find("SeriesTooShort") != std::string::npos,
          "analyze on too-short input exited " + std::to_string(short_exit));

  fs::remove_all(dir);
  o.note("surrogate-test exit " + std::to_string(surrogate_exit) + ", too-short exit " +
         std::to_string(short_exit));
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "pattern-fixtures", 1, pattern_fixtures},
      {"AC2", "m2-tir-equals-air", 10, dimension_two_identity},
      {"AC3", "oracle-equivalence", 30, oracle_equivalence},
      {"AC4", "logistic-m7-tir-one", 60, logistic_headline},
      {"AC5", "tir-exceeds-air", 120, tir_exceeds_air},
      {"AC6", "surrogate-discrimination", 900, surrogate_discrimination},
      {"AC7", "invariance-suite", 30, invariance_suite},
      {"AC8", "iaaft-properties", 60, iaaft_properties},
      {"AC9", "degenerate-handling", 1, degenerate_handling},
  };

  int passed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= c.budget_seconds)
      outcome.check(false, "runtime " + fmt_short(seconds) + " s over budget");
    passed += outcome.passed;
    std::printf("%s %s %s [%.2f s / %g s] %s\n", outcome.passed ? "PASS" : "FAIL", c.id.c_str(),
                c.title.c_str(), seconds, c.budget_seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance %d/%zu passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
