#include "nomdd/domain_store.hpp"

#include <cstdio>
#include <cstdlib>

namespace nomdd {

VarId DomainStore::add_var(Time lo, Time hi) {
  const auto id = static_cast<VarId>(vars_.size());
  vars_.push_back({id, lo, hi});
  return id;
}

ChangeResult DomainStore::tighten_lower(VarId v, Time value) {
  auto& x = vars_[static_cast<std::size_t>(v)];
  if (value <= x.lo) return ChangeResult::Unchanged;
  if (value > x.hi) return ChangeResult::EmptyDomain;
  if (!checkpoints_.empty()) trail_.push_back({v, x.lo, false});
  x.lo = value;
  ++events_;
  return ChangeResult::Changed;
}

ChangeResult DomainStore::tighten_upper(VarId v, Time value) {
  auto& x = vars_[static_cast<std::size_t>(v)];
  if (value >= x.hi) return ChangeResult::Unchanged;
  if (value < x.lo) return ChangeResult::EmptyDomain;
  if (!checkpoints_.empty()) trail_.push_back({v, x.hi, true});
  x.hi = value;
  ++events_;
  return ChangeResult::Changed;
}

ChangeResult DomainStore::assign(VarId v, Time value) {
  const auto a = tighten_lower(v, value);
  if (a == ChangeResult::EmptyDomain) return a;
  const auto b = tighten_upper(v, value);
  if (b == ChangeResult::EmptyDomain) return b;
  return (a == ChangeResult::Changed || b == ChangeResult::Changed) ? ChangeResult::Changed
                                                                    : ChangeResult::Unchanged;
}

Checkpoint DomainStore::checkpoint() {
  checkpoints_.push_back(trail_.size());
  ++generation_;
  return Checkpoint{checkpoints_.size() - 1};
}

void DomainStore::restore(Checkpoint token) {
  if (checkpoints_.empty() || token.level != checkpoints_.size() - 1) {
    std::fprintf(stderr, "DomainStore::restore: checkpoint %zu restored out of order\n", token.level);
    std::abort();
  }
  const std::size_t mark = checkpoints_.back();
  checkpoints_.pop_back();
  while (trail_.size() > mark) {
    const auto& e = trail_.back();
    auto& x = vars_[static_cast<std::size_t>(e.var)];
    (e.upper ? x.hi : x.lo) = e.old;
    trail_.pop_back();
  }
  ++generation_;
}

}  // namespace nomdd
