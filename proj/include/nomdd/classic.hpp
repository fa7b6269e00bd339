#pragma once

#include <span>
#include <vector>

#include "nomdd/domain_store.hpp"
#include "nomdd/instance.hpp"
#include "nomdd/propagator.hpp"
#include "nomdd/types.hpp"

namespace nomdd {

// Classic No-Overlap filtering (overload check, detectable precedences,
// not-first/not-last, edge finding). All rules are O(n^2) or O(n^3) sweeps
// over threshold sets with a linear ECT evaluation; they are the reference
// baseline, not the fastest known variants.

/// ECT(omega) = max over non-empty subsets of (min est + total p), computed
/// in linear time from the "all tasks with est >= x" family.
Time envelope_ect(std::span<const Window> tasks, JobSet omega);
/// LST(omega) = min over non-empty subsets of (max lct - total p).
Time envelope_lst(std::span<const Window> tasks, JobSet omega);

/// New bounds proposed by a rule; never looser than the input.
struct BoundUpdate {
  bool feasible = true;
  std::vector<Time> est;
  std::vector<Time> lct;
};

bool overload_feasible(std::span<const Window> tasks);
BoundUpdate detectable_precedences(std::span<const Window> tasks);
/// Not-last lowers lct; not-first raises est. Implemented as separate sweeps.
BoundUpdate not_last(std::span<const Window> tasks);
BoundUpdate not_first(std::span<const Window> tasks);
BoundUpdate edge_finding(std::span<const Window> tasks);

/// Task windows read from start-time variables 0..n-1 of the store.
std::vector<Window> task_windows(const Instance& instance, const DomainStore& store);

/// Store-level rule application. Start variable of job j is VarId j.
PropStatus overload_check(const Instance& instance, DomainStore& store);
PropStatus detectable_precedences(const Instance& instance, DomainStore& store);
PropStatus not_first_not_last(const Instance& instance, DomainStore& store);
PropStatus edge_finding(const Instance& instance, DomainStore& store);

/// Writes a BoundUpdate into start variables (lct maps to hi = lct - p).
PropStatus apply_bounds(const Instance& instance, DomainStore& store, const BoundUpdate& u);

/// The four rules in cheapest-first order, repeated until none tightens.
class ClassicNoOverlap final : public Propagator {
public:
  explicit ClassicNoOverlap(Instance instance) : instance_(std::move(instance)) {}
  PropStatus propagate(DomainStore& store) override;
  int priority() const override { return 1; }
  std::string_view name() const override { return "classic-no-overlap"; }

private:
  Instance instance_;
};

}  // namespace nomdd
