#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

namespace nomdd {

using Time = std::int64_t;
using Cost = std::int64_t;

// Jobs are indexed 0..n-1 internally and printed 1..n.
using JobId = int;

inline constexpr Time kTimeMax = std::numeric_limits<Time>::max() / 4;
inline constexpr Time kTimeMin = -kTimeMax;

/// Maximum number of jobs a JobSet (and therefore any MDD) can hold.
inline constexpr int kMaxJobs = 64;

/// Fixed-width set of jobs backed by a 64-bit mask.
class JobSet {
public:
  constexpr JobSet() = default;
  constexpr explicit JobSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr JobSet full(int n) {
    return JobSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr JobSet single(JobId j) { return JobSet(std::uint64_t{1} << j); }

  constexpr bool contains(JobId j) const { return (bits_ >> j) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }

  constexpr JobSet with(JobId j) const { return JobSet(bits_ | (std::uint64_t{1} << j)); }
  constexpr JobSet without(JobId j) const { return JobSet(bits_ & ~(std::uint64_t{1} << j)); }

  constexpr JobSet operator|(JobSet o) const { return JobSet(bits_ | o.bits_); }
  constexpr JobSet operator&(JobSet o) const { return JobSet(bits_ & o.bits_); }
  constexpr JobSet operator-(JobSet o) const { return JobSet(bits_ & ~o.bits_); }
  constexpr bool subset_of(JobSet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr bool operator==(const JobSet&) const = default;

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<JobId>(std::countr_zero(b)));
  }

  std::vector<JobId> to_vector() const {
    std::vector<JobId> out;
    for_each([&](JobId j) { out.push_back(j); });
    return out;
  }

private:
  std::uint64_t bits_ = 0;
};

/// Time window of one job under the current domains: start in [est, lct - p].
struct Window {
  Time est = 0;  // earliest start
  Time lct = 0;  // latest completion
  Time p = 1;    // processing time

  Time lst() const { return lct - p; }
  Time ect() const { return est + p; }
  bool operator==(const Window&) const = default;
};

/// Current windows of all jobs plus the horizon used for the sink state.
struct Windows {
  std::vector<Window> jobs;
  Time horizon = 0;

  int size() const { return static_cast<int>(jobs.size()); }
  const Window& operator[](JobId j) const { return jobs[static_cast<std::size_t>(j)]; }
  Window& operator[](JobId j) { return jobs[static_cast<std::size_t>(j)]; }
  bool operator==(const Windows&) const = default;
};

/// Time-reversal of a window set around its horizon: est' = H - lct, lct' = H - est.
inline Windows mirror(const Windows& w) {
  Windows out;
  out.horizon = w.horizon;
  out.jobs.reserve(w.jobs.size());
  for (const auto& j : w.jobs) out.jobs.push_back({w.horizon - j.lct, w.horizon - j.est, j.p});
  return out;
}

}  // namespace nomdd
