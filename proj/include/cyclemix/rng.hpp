// Counter-based splittable RNG (splitmix64 finalizer over key + counter).
//
// A draw is a pure function of (seed, stream, counter), so trial-level
// parallelism and block-wise Monte Carlo cannot change results: every worker
// derives its stream from (master seed, trial index, tag) and aggregation is
// done in index order. Not cryptographic.

#pragma once

#include <cmath>
#include <cstdint>

namespace cyclemix {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL) ^
             detail::mix64(stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(key_ ^ counter_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform in [0, n) by rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do { v = next_u64(); } while (v >= limit);
    return v % n;
  }

  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTau * u2);
    has_spare_ = true;
    return r * std::cos(kTau * u2);
  }

  // Independent deterministic stream derived from this one.
  SplitRng substream(std::uint64_t tag) const {
    return SplitRng(key_ ^ detail::mix64(tag + 0x7f4a7c159e3779b9ULL), tag);
  }

 private:
  static constexpr double kTau = 6.283185307179586476925286766559;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cyclemix
