#pragma once

// Pinned random streams. Everything here is defined bit-for-bit so seeded
// results do not depend on the standard library implementation.

#include <cstdint>
#include <random>
#include <span>

namespace irrev {

/// One splitmix64 step (Steele, Lea, Flood); advances `state`.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for ensemble member `index`: splitmix64 output after absorbing
/// seed and index. Distinct indices give unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::mt19937_64& engine) noexcept;

/// Uniform integer in [0, bound) by rejection; bound > 0.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) noexcept;

/// Fisher-Yates shuffle, last position first.
void shuffle(std::span<double> values, std::mt19937_64& engine) noexcept;

/// Box-Muller normal deviates; both outputs of each pair are used.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double next() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irrev
