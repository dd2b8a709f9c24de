#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numeric>

#include "irrev/error.hpp"
#include "irrev/random.hpp"
#include "irrev/surrogate.hpp"

namespace irrev {
namespace {

// The FFTW planner is not thread-safe; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer make_real(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer make_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

double spectrum_error(const fftw_complex* spectrum, std::span<const double> magnitudes) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    const double d = std::hypot(spectrum[k][0], spectrum[k][1]) - magnitudes[k];
    num += d * d;
    den += magnitudes[k] * magnitudes[k];
  }
  return std::sqrt(num / den);
}

// Order-preserving map from finite doubles to unsigned integers; -0 and +0
// share a key so they tie.
std::uint64_t sort_key(double v) noexcept {
  const auto bits = std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v);
  return (bits & 0x8000000000000000ULL) ? ~bits : bits | 0x8000000000000000ULL;
}

}  // namespace

struct IaaftGenerator::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

void IaaftParams::validate() const {
  if (max_iterations < 1) throw Error(ErrorCode::InvalidParams, "max_iterations must be >= 1");
  if (n_surrogates < 1) throw Error(ErrorCode::InvalidParams, "n_surrogates must be >= 1");
  if (threads < 0) throw Error(ErrorCode::InvalidParams, "threads must be >= 0");
}

void rank_order(std::span<const double> shaped, std::span<const double> sorted_values,
                std::span<double> result, std::vector<std::uint32_t>& order) {
  const std::size_t n = shaped.size();
  constexpr int kDigitBits = 16;
  constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;
  constexpr int kPasses = 64 / kDigitBits;

  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = sort_key(shaped[i]);

  std::vector<std::uint32_t> counts(kBuckets * kPasses, 0);
  for (std::uint64_t key : keys)
    for (int p = 0; p < kPasses; ++p) ++counts[p * kBuckets + ((key >> (p * kDigitBits)) & 0xFFFF)];

  order.resize(n);
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  std::vector<std::uint32_t> scratch(n);
  // LSD passes are stable, so equal keys stay in index order.
  for (int p = 0; p < kPasses; ++p) {
    std::uint32_t* bucket = counts.data() + p * kBuckets;
    const std::uint64_t first_digit = (keys[0] >> (p * kDigitBits)) & 0xFFFF;
    if (bucket[first_digit] == n) continue;
    std::uint32_t running = 0;
    for (std::size_t b = 0; b < kBuckets; ++b) {
      const std::uint32_t c = bucket[b];
      bucket[b] = running;
      running += c;
    }
    for (std::uint32_t idx : order)
      scratch[bucket[(keys[idx] >> (p * kDigitBits)) & 0xFFFF]++] = idx;
    order.swap(scratch);
  }
  for (std::size_t r = 0; r < n; ++r) result[order[r]] = sorted_values[r];
}

std::vector<std::uint32_t> rank_permutation_reference(std::span<const double> values) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  return order;
}

double relative_spectrum_error(std::span<const double> candidate,
                               std::span<const double> reference) {
  if (candidate.size() != reference.size() || candidate.empty())
    throw Error(ErrorCode::LengthMismatch, "spectrum comparison needs equal, non-empty lengths");
  const std::size_t n = candidate.size();
  const std::size_t bins = n / 2 + 1;
  auto in = make_real(n);
  auto a = make_complex(bins);
  auto b = make_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), a.get(), FFTW_ESTIMATE);
  }
  std::copy(reference.begin(), reference.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), a.get());
  std::copy(candidate.begin(), candidate.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), b.get());
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> magnitudes(bins);
  for (std::size_t k = 0; k < bins; ++k) magnitudes[k] = std::hypot(a[k][0], a[k][1]);
  return spectrum_error(b.get(), magnitudes);
}

IaaftGenerator::IaaftGenerator(std::span<const double> series)
    : original_(series.begin(), series.end()), sorted_(series.begin(), series.end()) {
  const std::size_t n = series.size();
  if (n < 8)
    throw Error(ErrorCode::TooShort,
                "IAAFT needs at least 8 samples, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(series[i]))
      throw Error(ErrorCode::NonFiniteSample, "sample " + std::to_string(i + 1) + " is not finite");
  std::sort(sorted_.begin(), sorted_.end());
  if (sorted_.front() == sorted_.back())
    throw Error(ErrorCode::DegenerateSeries,
                "constant series has no non-DC spectrum to preserve");

  const std::size_t bins = n / 2 + 1;
  auto real = make_real(n);
  auto spectrum = make_complex(bins);
  auto plans = std::make_unique<Plans>();
  {
    std::lock_guard lock(planner_mutex());
    plans->forward =
        fftw_plan_dft_r2c_1d(static_cast<int>(n), real.get(), spectrum.get(), FFTW_ESTIMATE);
    plans->backward =
        fftw_plan_dft_c2r_1d(static_cast<int>(n), spectrum.get(), real.get(), FFTW_ESTIMATE);
  }
  std::copy(series.begin(), series.end(), real.get());
  fftw_execute_dft_r2c(plans->forward, real.get(), spectrum.get());
  magnitudes_.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) magnitudes_[k] = std::hypot(spectrum[k][0], spectrum[k][1]);
  dc_ = spectrum[0][0];
  plans_ = plans.release();
}

IaaftGenerator::~IaaftGenerator() {
  if (plans_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->backward);
  delete plans_;
}

Surrogate IaaftGenerator::generate(std::uint64_t seed, std::uint64_t index,
                                   int max_iterations) const {
  if (max_iterations < 1) throw Error(ErrorCode::InvalidParams, "max_iterations must be >= 1");
  const std::size_t n = sorted_.size();
  const std::size_t bins = magnitudes_.size();

  Surrogate out;
  out.series = original_;
  std::mt19937_64 engine(derive_seed(seed, index));
  shuffle(out.series, engine);

  auto real = make_real(n);
  auto spectrum = make_complex(bins);
  std::vector<double> shaped(n);
  std::vector<std::uint32_t> order, previous;
  auto& diag = out.diagnostics;

  for (int it = 1; it <= max_iterations; ++it) {
    std::copy(out.series.begin(), out.series.end(), real.get());
    fftw_execute_dft_r2c(plans_->forward, real.get(), spectrum.get());
    if (it > 1) diag.error_history.push_back(spectrum_error(spectrum.get(), magnitudes_));

    // Impose the reference magnitudes, keeping the current phases.
    spectrum[0][0] = dc_;
    spectrum[0][1] = 0.0;
    for (std::size_t k = 1; k < bins; ++k) {
      const double mag = std::hypot(spectrum[k][0], spectrum[k][1]);
      if (mag == 0.0) {
        spectrum[k][0] = magnitudes_[k];
        spectrum[k][1] = 0.0;
      } else {
        const double scale = magnitudes_[k] / mag;
        spectrum[k][0] *= scale;
        spectrum[k][1] *= scale;
      }
    }
    // Unnormalised inverse; the positive factor n does not change ranks.
    fftw_execute_dft_c2r(plans_->backward, spectrum.get(), real.get());
    std::copy(real.get(), real.get() + n, shaped.begin());

    rank_order(shaped, sorted_, out.series, order);
    diag.iterations_used = it;
    if (order == previous) {
      diag.converged = true;
      break;
    }
    previous.swap(order);
  }

  std::copy(out.series.begin(), out.series.end(), real.get());
  fftw_execute_dft_r2c(plans_->forward, real.get(), spectrum.get());
  diag.spectrum_rms_error = spectrum_error(spectrum.get(), magnitudes_);
  diag.error_history.push_back(diag.spectrum_rms_error);
  return out;
}

Surrogate iaaft(std::span<const double> series, const IaaftParams& params, std::uint64_t index) {
  params.validate();
  IaaftGenerator generator(series);
  return generator.generate(params.seed, index, params.max_iterations);
}

}  // namespace irrev
