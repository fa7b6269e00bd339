#pragma once

#include <cstdint>

namespace nomdd {

/// SplitMix64 generator. 64-bit state, one add and a
/// finalizer per draw; output is identical on every platform.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform(lo, hi) draws by rejection so the result is unbiased and does not
/// depend on any standard-library distribution.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi], hi >= lo.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
  }

  /// Independent stream for the k-th child (e.g. the k-th instance of a corpus).
  SplitMix64 split(std::uint64_t k) const {
    SplitMix64 s(state_ ^ (k * 0xD1B54A32D192ED03ULL));
    return SplitMix64(s.next());
  }

private:
  std::uint64_t state_;
};

}  // namespace nomdd
