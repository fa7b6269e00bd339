#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "nomdd/types.hpp"

namespace nomdd {

/// Pairs i < j ("i completes before j starts"), stored as successor masks.
class PrecedenceSet {
public:
  PrecedenceSet() = default;
  explicit PrecedenceSet(int n) : succ_(static_cast<std::size_t>(n)) {}

  int jobs() const { return static_cast<int>(succ_.size()); }
  void add(JobId i, JobId j) { succ_[static_cast<std::size_t>(i)] = succ_[static_cast<std::size_t>(i)].with(j); }
  bool contains(JobId i, JobId j) const { return succ_[static_cast<std::size_t>(i)].contains(j); }
  JobSet successors(JobId i) const { return succ_[static_cast<std::size_t>(i)]; }

  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& m : succ_) s += static_cast<std::size_t>(m.size());
    return s;
  }

  std::vector<std::pair<JobId, JobId>> pairs() const {
    std::vector<std::pair<JobId, JobId>> out;
    for (JobId i = 0; i < jobs(); ++i) successors(i).for_each([&](JobId j) { out.emplace_back(i, j); });
    return out;
  }

  bool subset_of(const PrecedenceSet& o) const {
    for (std::size_t i = 0; i < succ_.size(); ++i)
      if (!succ_[i].subset_of(o.succ_[i])) return false;
    return true;
  }

  bool operator==(const PrecedenceSet&) const = default;

private:
  std::vector<JobSet> succ_;
};

/// One pass of est_j >= est_i + p_i and lct_i <= lct_j - p_j for every i < j.
inline Windows apply_precedences(const PrecedenceSet& prec, Windows w) {
  const Windows src = w;
  for (JobId i = 0; i < prec.jobs(); ++i) {
    prec.successors(i).for_each([&](JobId j) {
      w[j].est = std::max(w[j].est, src[i].est + src[i].p);
      w[i].lct = std::min(w[i].lct, src[j].lct - src[j].p);
    });
  }
  return w;
}

}  // namespace nomdd
