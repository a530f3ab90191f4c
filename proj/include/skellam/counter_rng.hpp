#pragma once

#include <cstdint>

#include "skellam/lattice_measure.hpp"

namespace skellam {

/// Output of the splitmix64 sequence started at `seed`, addressed by index:
/// finalize(seed + (index + 1) * 0x9E3779B97F4A7C15). Random access makes
/// simulation draws shardable with bit-identical merges, and the sequence is
/// portable across implementations.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double u01_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential convenience wrapper over splitmix64_at.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return splitmix64_at(seed_, counter_++); }
  double u01() { return u01_from_bits(next_u64()); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Random signed measure with weights in [-scale, scale] and support inside
/// [-max_half, max_half]; used by property checks.
inline LatticeMeasure random_signed_measure(CounterRng& rng, std::int64_t max_half = 8,
                                            double scale = 1.0) {
  const std::int64_t lo = -rng.uniform_int(0, max_half);
  const std::int64_t hi = rng.uniform_int(0, max_half);
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
  for (double& x : w) x = rng.uniform(-scale, scale);
  return LatticeMeasure(lo, std::move(w));
}

/// Random probability measure with support inside [-max_half, max_half].
inline LatticeMeasure random_probability_measure(CounterRng& rng,
                                                 std::int64_t max_half = 8) {
  const std::int64_t lo = -rng.uniform_int(0, max_half);
  const std::int64_t hi = rng.uniform_int(0, max_half);
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
  double total = 0.0;
  for (double& x : w) {
    x = 0.01 + rng.u01();
    total += x;
  }
  for (double& x : w) x /= total;
  return LatticeMeasure(lo, std::move(w));
}

/// Random measure with (numerically) zero total mass: difference of two
/// random probability measures.
inline LatticeMeasure random_zero_mass_measure(CounterRng& rng,
                                               std::int64_t max_half = 8) {
  return linear_combine(1.0, random_probability_measure(rng, max_half), -1.0,
                        random_probability_measure(rng, max_half));
}

/// Random symmetric probability measure concentrated on Z \ {0}.
inline LatticeMeasure random_symmetric_probability(CounterRng& rng,
                                                   std::int64_t max_half = 8) {
  const std::int64_t m = rng.uniform_int(1, max_half);
  std::vector<double> w(static_cast<std::size_t>(2 * m + 1), 0.0);
  double total = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) {
    const double x = 0.01 + rng.u01();
    w[static_cast<std::size_t>(m - i)] = x;
    w[static_cast<std::size_t>(m + i)] = x;
    total += 2.0 * x;
  }
  for (double& x : w) x /= total;
  return LatticeMeasure(-m, std::move(w));
}

}  // namespace skellam
