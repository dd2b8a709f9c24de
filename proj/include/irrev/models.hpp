#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irrev {

enum class ModelKind { logistic, henon, gaussian };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view text);

struct LogisticParams {
  double r = 4.0;
  double x1 = 0.01;
};

struct HenonParams {
  double alpha = 1.4;
  double beta = 0.3;
  double x1 = 0.01;
  double y1 = 0.01;
};

struct GaussianParams {
  double mean = 0.0;
  double sd = 1.0;
  std::optional<std::uint64_t> seed;
};

struct ModelSpec {
  ModelKind kind = ModelKind::logistic;
  std::size_t n = 0;
  std::size_t burn_in = 0;
  LogisticParams logistic;
  HenonParams henon;
  GaussianParams gaussian;

  /// Throws InvalidParams.
  void validate() const;
  /// Compact one-line description, used as report provenance.
  std::string describe() const;
};

/// Series of spec.n samples after discarding spec.burn_in iterates. The first
/// returned sample of a map with burn_in = 0 is its initial condition.
/// Henon yields the x-component. Throws DivergedOrbit or InvalidParams.
std::vector<double> generate(const ModelSpec& spec);

/// Benchmark series length, 20 * 7!.
constexpr std::size_t reference_length() noexcept { return 20 * 5040; }

}  // namespace irrev
