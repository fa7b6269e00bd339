#include <algorithm>
#include <deque>
#include <map>

#include "nomdd/propagator.hpp"

namespace nomdd {

PropStatus Engine::fixpoint(DomainStore& store) {
  std::map<int, std::deque<std::size_t>> queue;
  std::vector<char> queued(props_.size(), 0);
  auto enqueue_all = [&] {
    for (std::size_t i = 0; i < props_.size(); ++i) {
      if (!queued[i]) {
        queue[props_[i]->priority()].push_back(i);
        queued[i] = 1;
      }
    }
  };
  enqueue_all();

  while (!queue.empty()) {
    auto it = queue.begin();
    const std::size_t idx = it->second.front();
    it->second.pop_front();
    if (it->second.empty()) queue.erase(it);
    queued[idx] = 0;

    const auto before = store.events();
    ++calls_;
    if (props_[idx]->propagate(store) == PropStatus::Infeasible) return PropStatus::Infeasible;
    if (store.events() != before) enqueue_all();
  }
  return PropStatus::Feasible;
}

}  // namespace nomdd
