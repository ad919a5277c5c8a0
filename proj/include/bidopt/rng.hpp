#pragma once

#include <cstdint>

namespace bidopt {

/// Counter-based generator used everywhere randomness is needed.
/// SplitMix64: tiny state, full 64-bit period per stream, and trivially
/// splittable into independent child streams, which keeps every (day, hour)
/// cell reproducible regardless of evaluation order or worker count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n). Fixed-point multiply keeps the draw deterministic
  /// across standard libraries (uniform_int_distribution is not portable).
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Mixes a stream label into a seed; used to derive per-(day, hour) child
/// seeds from the master seed: child = split_seed(split_seed(master, day), hour).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t label) {
  SplitMix64 g(seed ^ (label * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  return g.next();
}

}  // namespace bidopt
