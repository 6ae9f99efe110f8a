#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace rtmwcs {

/// Seeded RNG with hand-rolled output distributions. mt19937_64 output is
/// pinned by the standard and the transforms below avoid the
/// implementation-defined std::*_distribution classes, so streams are
/// bit-identical across standard libraries, not just across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (second value cached).
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  /// Uniform integer in [lo, hi], inclusive, via rejection.
  int uniform_int(int lo, int hi) {
    const auto range =
        static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
    const std::uint64_t reject_above =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v = 0;
    do {
      v = gen_();
    } while (v >= reject_above);
    return lo + static_cast<int>(v % range);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Stream seed derivation (splitmix64 finalizer chain) so every
/// (sweep point, trial, stream) pair gets an independent reproducible seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t x = master + 0x9e3779b97f4a7c15ull;
  x = detail::mix64(x + 0x9e3779b97f4a7c15ull * (a + 1));
  x = detail::mix64(x + 0x9e3779b97f4a7c15ull * (b + 1));
  x = detail::mix64(x + 0x9e3779b97f4a7c15ull * (c + 1));
  return x;
}

}  // namespace rtmwcs
