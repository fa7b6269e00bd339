#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomdd/instance.hpp"
#include "nomdd/precedence.hpp"
#include "nomdd/types.hpp"

namespace nomdd {

/// Largest instance the permutation oracle accepts.
inline constexpr int kOracleMaxJobs = 10;

class OracleTooLarge : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Ground truth over every job order. A permutation is feasible iff its
/// greedy-earliest schedule meets every deadline.
struct OracleReport {
  int n = 0;
  std::uint64_t feasible_count = 0;
  std::vector<std::vector<JobId>> feasible;  // in lexicographic order
  std::vector<Time> min_start;               // per job, over feasible orders
  std::vector<Time> max_end;
  /// i < j when i precedes j in every feasible order (all pairs if none is).
  PrecedenceSet precedences;
  std::optional<Cost> optimum;               // empty when infeasible or not requested

  bool infeasible() const { return feasible_count == 0; }
};

struct OracleOptions {
  bool optimum = true;
  bool keep_permutations = true;
};

/// Uses `windows` instead of the instance's [r, dbar] when given; due dates
/// always come from the instance. Throws OracleTooLarge when n > 10.
OracleReport oracle_report(const Instance& instance, const std::optional<Windows>& windows = std::nullopt,
                           OracleOptions options = {});

/// Greedy-earliest starts of `order`, or nothing when a deadline is missed.
std::optional<std::vector<Time>> greedy_schedule(const Windows& w, std::span<const JobId> order);
/// Latest starts of `order` (each job ends at min(lct, next start)); assumes
/// the order is feasible.
std::vector<Time> latest_schedule(const Windows& w, std::span<const JobId> order);

/// Minimal total earliness-tardiness over schedules that follow `order`.
/// Throws InfeasibleSchedule when the order is infeasible.
Cost oracle_optimum_for_permutation(const Instance& instance, std::span<const JobId> order);
Cost oracle_optimum_for_permutation(const Instance& instance, const Windows& w, std::span<const JobId> order);

/// The two timing evaluations behind the above: a dynamic program over
/// integer end times, and a convex piecewise-linear sweep. Both return
/// nothing for infeasible orders.
std::optional<Cost> timing_by_enumeration(const Instance& instance, const Windows& w, std::span<const JobId> order);
std::optional<Cost> timing_by_sweep(const Instance& instance, const Windows& w, std::span<const JobId> order);

/// Text block: n, feasible, min_start, max_end, precedences, optimum.
std::string format_report(const OracleReport& report);

}  // namespace nomdd
