#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nomdd/domain_store.hpp"
#include "nomdd/instance.hpp"
#include "nomdd/precedence.hpp"
#include "nomdd/propagator.hpp"
#include "nomdd/types.hpp"

namespace nomdd {

/// Top-down properties: jobs on every path (A), jobs on some path (S), a lower
/// bound on the next start and the layer index K.
struct DownState {
  JobSet A;
  JobSet S;
  Time est = 0;
  int K = 0;
  bool operator==(const DownState&) const = default;
};

/// Bottom-up properties: jobs on every / some path to the sink, and an upper
/// bound on the time the suffix can start.
struct UpState {
  JobSet A;
  JobSet S;
  Time lst = 0;
  bool operator==(const UpState&) const = default;
};

struct RelaxedState {
  DownState down;
  UpState up;
  bool operator==(const RelaxedState&) const = default;
};

JobSet lambda_relaxed(const DownState& s, const Windows& w);
DownState tau_relaxed(const DownState& s, JobId i, const Windows& w);

/// (intersection, union, min est); layers must match.
DownState merge(const DownState& a, const DownState& b);
/// (intersection, union, max lst).
UpState merge(const UpState& a, const UpState& b);
RelaxedState merge(const RelaxedState& a, const RelaxedState& b);

/// Group index per state of one layer (states assumed distinct). Layers within
/// the width keep one group per state; otherwise states are grouped by est
/// when at most W values occur, else by W equal-width est intervals
/// [a, b) with the last one closed. Indices are compact, ordered by est.
std::vector<int> bucket_assign(const std::vector<DownState>& states, int W);
/// Deduplicates one layer, then folds each bucket into one state.
std::vector<DownState> bucket_layer(const std::vector<DownState>& states, int W);

/// Width-bounded sequencing diagram with alive flags, so that edges and nodes can be
/// deleted and split in place.
struct RelaxedMdd {
  struct Node {
    DownState down;
    UpState up;
    int layer = 0;
    bool alive = true;
    std::vector<std::uint32_t> in;
    std::vector<std::uint32_t> out;
  };
  struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    JobId label = 0;
    bool alive = true;
  };

  int n = 0;
  int width_cap = 1;
  bool infeasible = false;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::uint32_t>> layers;  // node ids, dead ones included

  bool empty() const { return infeasible; }
  std::vector<std::uint32_t> layer(int k) const;  // alive nodes only
  std::size_t layer_width(int k) const;
  std::size_t width() const;
  std::size_t edge_count() const;
  std::size_t node_count() const;
};

RelaxedMdd compile_relaxed(const Windows& w, int W);
RelaxedMdd compile_relaxed(const Instance& instance, const DomainStore& store, int W);

/// Keep/drop test for one edge against the current node properties.
bool edge_check(const RelaxedMdd& mdd, std::uint32_t edge, const Windows& w);

/// One top-down (bottom-up) pass. Returns true when any edge, node or
/// property changed; sets mdd.infeasible when the root or sink dies.
bool update_down(RelaxedMdd& mdd, const Windows& w);
bool update_up(RelaxedMdd& mdd, const Windows& w);
/// Alternates both passes until neither changes anything.
bool update(RelaxedMdd& mdd, const Windows& w);

/// Splits up to `budget` relaxed nodes by edge extraction. Returns the number
/// of splits performed.
int refine(RelaxedMdd& mdd, const Windows& w, int budget);

struct RelaxedBounds {
  bool feasible = true;
  Windows windows;
  std::uint64_t edge_visits = 0;
};
RelaxedBounds relaxed_bc_filter(const RelaxedMdd& mdd, const Windows& w);

/// i < j iff no node has j in S_down and i in S_up. When `tests` is given it
/// accumulates the number of membership tests.
PrecedenceSet extract_precedences(const RelaxedMdd& mdd, std::uint64_t* tests = nullptr);

std::uint64_t count_paths(const RelaxedMdd& mdd);
std::vector<std::vector<JobId>> enumerate_paths(const RelaxedMdd& mdd, std::size_t limit = 1000000);

/// Node label "A/S, est | A/S, lst" with jobs printed 1-based.
std::string to_dot(const RelaxedMdd& mdd);

/// Relaxed diagram packaged as a propagator. The diagram is recompiled whenever
/// the store has moved to another search node (generation change); within one
/// node it is updated in place and refined until `refine_budget` splits have
/// been spent.
class MddPropagator final : public Propagator {
public:
  enum class Mode { RelaxedBC, Precedence };

  MddPropagator(Instance instance, Mode mode, int width, int refine_budget);

  PropStatus propagate(DomainStore& store) override;
  int priority() const override { return 2; }
  std::string_view name() const override { return mode_ == Mode::RelaxedBC ? "relaxed-bc" : "pe"; }

  const RelaxedMdd& mdd() const { return mdd_; }
  std::uint64_t compilations() const { return compilations_; }
  std::uint64_t splits() const { return splits_; }

private:
  Instance instance_;
  Mode mode_;
  int width_;
  int budget_;
  int budget_left_ = 0;
  RelaxedMdd mdd_;
  std::optional<std::uint64_t> generation_;
  std::uint64_t compilations_ = 0;
  std::uint64_t splits_ = 0;
};

}  // namespace nomdd
