#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nomdd/domain_store.hpp"
#include "nomdd/instance.hpp"
#include "nomdd/precedence.hpp"
#include "nomdd/propagator.hpp"
#include "nomdd/types.hpp"

namespace nomdd {

/// Top-down state of the exact sequencing diagram: jobs already placed and
/// the earliest time at which the next job can start.
struct ExactState {
  JobSet placed;
  Time est = 0;
  bool operator==(const ExactState&) const = default;
};

/// Labels leaving `s`: unplaced jobs that still meet their deadline when
/// started at max(est, est_i).
JobSet lambda(const ExactState& s, const Windows& w);

/// Successor after appending job i. The last job leads to the sink (J, H).
ExactState tau(const ExactState& s, JobId i, const Windows& w);

/// Smallest latest start among jobs outside `placed` (kTimeMax when none).
/// A state whose est exceeds it cannot reach the sink.
Time min_lst(const Windows& w, JobSet placed);

/// Layered DAG whose root-to-sink label sequences are exactly the feasible
/// job permutations under the windows it was compiled with.
///
/// Nodes are stored layer by layer; edges are stored grouped by origin node,
/// so each node owns the contiguous range [first_out, first_out + out_count).
/// An infeasible window set compiles to an empty diagram (no nodes).
class ExactMdd {
public:
  struct Node {
    ExactState state;
    int layer = 0;
    std::uint32_t first_out = 0;
    std::uint32_t out_count = 0;
  };
  struct Edge {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    JobId label = 0;
  };

  int jobs() const { return n_; }
  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Node ids of layer k, 0..n.
  std::vector<std::uint32_t> layer(int k) const;
  std::size_t width() const;
  /// Largest layer seen during top-down expansion, before dead ends are pruned.
  std::size_t peak_width() const { return peak_width_; }

private:
  friend ExactMdd compile_exact(const Windows& w);
  int n_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> layer_begin_;
  std::size_t peak_width_ = 0;
};

ExactMdd compile_exact(const Windows& w);
ExactMdd compile_exact(const Instance& instance, const DomainStore& store);

struct StartFilter {
  bool feasible = true;
  std::vector<Time> est;          // tightened earliest starts
  std::uint64_t edge_visits = 0;  // equals |E| for a feasible diagram
};

/// est_i <- max(est_i, min over edges labeled i of est(origin)); one pass over E.
StartFilter bc_filter(const ExactMdd& mdd, const Windows& w);

/// Bound-consistent start and end bounds: bc_filter on the diagram and on the
/// diagram of the mirrored windows, mapped back with lct_i <- H - est'_i.
struct BcBounds {
  bool feasible = true;
  Windows windows;
  std::size_t peak_width = 0;  // max of both compilations
  std::size_t edges = 0;       // |E| of the forward diagram
};
BcBounds exact_bc(const Windows& w);

std::uint64_t count_paths(const ExactMdd& mdd);
/// Label sequences of all root-to-sink paths, up to `limit` of them.
std::vector<std::vector<JobId>> enumerate_paths(const ExactMdd& mdd, std::size_t limit = 1000000);

/// i < j iff no node has j placed while i is still to come.
PrecedenceSet extract_precedences(const ExactMdd& mdd);

/// Graphviz rendering, node label "A_down, est" with jobs printed 1-based.
std::string to_dot(const ExactMdd& mdd);

/// Recompiles the exact diagram on every call and applies exact_bc.
class ExactBcPropagator final : public Propagator {
public:
  explicit ExactBcPropagator(Instance instance) : instance_(std::move(instance)) {}
  PropStatus propagate(DomainStore& store) override;
  int priority() const override { return 2; }
  std::string_view name() const override { return "exact-bc"; }
  std::size_t max_width_seen() const { return max_width_; }

private:
  Instance instance_;
  std::size_t max_width_ = 0;
};

}  // namespace nomdd
