#pragma once

#include <cstdint>
#include <vector>

#include "nomdd/types.hpp"

namespace nomdd {

using VarId = int;

enum class ChangeResult { Unchanged, Changed, EmptyDomain };

struct IntervalVar {
  VarId id = 0;
  Time lo = 0;
  Time hi = 0;
};

/// Opaque handle returned by DomainStore::checkpoint().
struct Checkpoint {
  std::size_t level = 0;
};

/// Reversible interval domains with a trail.
///
/// Every bound change is trailed so that restore() brings every variable back
/// to the bounds it held when the matching checkpoint was taken. Checkpoints
/// must be restored in LIFO order; anything else aborts.
class DomainStore {
public:
  VarId add_var(Time lo, Time hi);

  int size() const { return static_cast<int>(vars_.size()); }
  Time lo(VarId v) const { return vars_[static_cast<std::size_t>(v)].lo; }
  Time hi(VarId v) const { return vars_[static_cast<std::size_t>(v)].hi; }
  bool fixed(VarId v) const { return lo(v) == hi(v); }
  const IntervalVar& var(VarId v) const { return vars_[static_cast<std::size_t>(v)]; }

  ChangeResult tighten_lower(VarId v, Time value);
  ChangeResult tighten_upper(VarId v, Time value);
  /// Both bounds to `value`; EmptyDomain when value is outside [lo, hi].
  ChangeResult assign(VarId v, Time value);

  Checkpoint checkpoint();
  void restore(Checkpoint token);
  std::size_t depth() const { return checkpoints_.size(); }

  /// Count of bound changes since construction; never decreases.
  std::uint64_t events() const { return events_; }
  /// Bumped on every checkpoint and restore. Lets cached structures detect that
  /// the store moved to another search node.
  std::uint64_t generation() const { return generation_; }
  std::size_t trail_size() const { return trail_.size(); }

private:
  struct TrailEntry {
    VarId var;
    Time old;
    bool upper;
  };

  std::vector<IntervalVar> vars_;
  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> checkpoints_;
  std::uint64_t events_ = 0;
  std::uint64_t generation_ = 0;
};

}  // namespace nomdd
