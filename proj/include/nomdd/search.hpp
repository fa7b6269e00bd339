#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomdd/instance.hpp"
#include "nomdd/model.hpp"

namespace nomdd {

enum class DecisionKind { Root, Assign, ExcludeBelow };

/// Assign: s_var = value. ExcludeBelow: s_var >= value.
struct Decision {
  VarId var = -1;
  DecisionKind kind = DecisionKind::Root;
  Time value = 0;
  bool operator==(const Decision&) const = default;
};

enum class NodeStatus { Branch, Fail, Solution };

struct LogEntry {
  int depth = 0;
  Decision decision;
  NodeStatus status = NodeStatus::Branch;
  bool operator==(const LogEntry&) const = default;
};

/// Pre-order record of a search tree plus the incumbents found in it.
struct ReplayLog {
  static constexpr int kVersion = 1;
  std::uint64_t digest = 0;
  std::string heuristic = "cos";
  std::uint64_t node_limit = 0;    // 0 = none
  std::int64_t time_limit_ms = 0;  // 0 = none
  bool complete = false;           // false when a limit cut the search short
  std::vector<std::pair<std::uint64_t, Cost>> incumbents;  // (node index, cost)
  std::vector<LogEntry> nodes;

  bool operator==(const ReplayLog&) const = default;
};

class LogError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string save_log(const ReplayLog& log);
ReplayLog load_log(std::string_view text);

struct SearchLimits {
  std::uint64_t node_limit = 0;    // 0 = none
  std::int64_t time_limit_ms = 0;  // 0 = none
};

struct SearchStats {
  std::uint64_t nodes = 0;  // Z: every node whose fixpoint ran
  std::uint64_t failures = 0;
  std::uint64_t solutions = 0;
  std::optional<Cost> best;
  double time_ms = 0;
  bool complete = false;
  std::vector<double> node_us;  // propagation time per node
};

/// Last-conflict stamps for conflict ordering search.
struct ConflictState {
  std::vector<std::uint64_t> stamp;
  std::uint64_t clock = 0;

  explicit ConflictState(int n = 0) : stamp(static_cast<std::size_t>(n), 0) {}
  void record(VarId v) { stamp[static_cast<std::size_t>(v)] = ++clock; }
};

/// Unfixed start variable with the latest conflict; otherwise smallest lower
/// bound, then smallest id. Left branch assigns the lower bound. Returns a
/// Root decision when every start is fixed.
Decision cos_next_decision(const Model& model, const ConflictState& conflicts);

struct SolveResult {
  std::optional<Schedule> best;
  SearchStats stats;
  ReplayLog log;
};

/// Depth-first branch and bound with conflict ordering search.
SolveResult solve(Model& model, const SearchLimits& limits = {});

class DigestMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Re-explores the recorded tree under `model`. Subtrees below a node that
/// fails are skipped and not counted. Throws DigestMismatch.
SearchStats replay(const ReplayLog& log, Model& model);

/// (Z - Z') / Z'. Throws std::domain_error when Z' is 0.
double gap(std::uint64_t z, std::uint64_t z_prime);

}  // namespace nomdd
