#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "nomdd/domain_store.hpp"

namespace nomdd {

enum class PropStatus { Feasible, Infeasible };

/// A filtering algorithm over a DomainStore. Implementations only tighten
/// bounds and report Infeasible only when no solution remains.
class Propagator {
public:
  virtual ~Propagator() = default;
  virtual PropStatus propagate(DomainStore& store) = 0;
  /// Lower runs first.
  virtual int priority() const { return 0; }
  virtual std::string_view name() const = 0;
};

/// Runs registered propagators to a common fixpoint. Scheduling is
/// priority-then-FIFO; any bound change re-queues every propagator.
class Engine {
public:
  void add(std::unique_ptr<Propagator> p) { props_.push_back(std::move(p)); }
  std::size_t size() const { return props_.size(); }
  Propagator& at(std::size_t i) { return *props_[i]; }

  PropStatus fixpoint(DomainStore& store);

  /// Number of propagate() calls made by this engine so far.
  std::uint64_t calls() const { return calls_; }

private:
  std::vector<std::unique_ptr<Propagator>> props_;
  std::uint64_t calls_ = 0;
};

/// Converts a store change into a propagation status.
inline bool failed(ChangeResult r) { return r == ChangeResult::EmptyDomain; }

}  // namespace nomdd
