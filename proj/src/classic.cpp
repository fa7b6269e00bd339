#include "nomdd/classic.hpp"

#include <algorithm>
#include <numeric>

namespace nomdd {

namespace {

std::vector<int> order_by(std::span<const Window> tasks, auto key) {
  std::vector<int> idx(tasks.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return key(tasks[static_cast<std::size_t>(a)]) < key(tasks[static_cast<std::size_t>(b)]);
  });
  return idx;
}

// by_est_desc must list every task by non-increasing est.
Time ect_sorted(std::span<const Window> tasks, std::span<const int> by_est_desc, JobSet omega) {
  Time best = kTimeMin;
  Time sum = 0;
  for (const int k : by_est_desc) {
    if (!omega.contains(k)) continue;
    const auto& t = tasks[static_cast<std::size_t>(k)];
    sum += t.p;
    best = std::max(best, t.est + sum);
  }
  return best;
}

// by_lct_asc must list every task by non-decreasing lct.
Time lst_sorted(std::span<const Window> tasks, std::span<const int> by_lct_asc, JobSet omega) {
  Time best = kTimeMax;
  Time sum = 0;
  for (const int k : by_lct_asc) {
    if (!omega.contains(k)) continue;
    const auto& t = tasks[static_cast<std::size_t>(k)];
    sum += t.p;
    best = std::min(best, t.lct - sum);
  }
  return best;
}

std::vector<int> est_desc(std::span<const Window> tasks) {
  auto idx = order_by(tasks, [](const Window& w) { return -w.est; });
  return idx;
}

std::vector<Window> mirrored(std::span<const Window> tasks) {
  std::vector<Window> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back({-t.lct, -t.est, t.p});
  return out;
}

BoundUpdate unchanged(std::span<const Window> tasks) {
  BoundUpdate u;
  for (const auto& t : tasks) {
    u.est.push_back(t.est);
    u.lct.push_back(t.lct);
  }
  return u;
}

// j must come after Theta_j = { k != j : ect_j > lst_k }.
std::vector<Time> detectable_lower(std::span<const Window> tasks) {
  const auto order = est_desc(tasks);
  const int n = static_cast<int>(tasks.size());
  std::vector<Time> est(tasks.size());
  for (int j = 0; j < n; ++j) {
    const auto& tj = tasks[static_cast<std::size_t>(j)];
    JobSet theta;
    for (int k = 0; k < n; ++k)
      if (k != j && tj.ect() > tasks[static_cast<std::size_t>(k)].lst()) theta = theta.with(k);
    est[static_cast<std::size_t>(j)] = theta.empty() ? tj.est : std::max(tj.est, ect_sorted(tasks, order, theta));
  }
  return est;
}

// For Omega = { k != j : lct_k <= L } over every threshold L:
// ECT(Omega + j) > L  =>  j after Omega  =>  est_j >= ECT(Omega).
std::vector<Time> edge_finding_lower(std::span<const Window> tasks) {
  const auto by_est = est_desc(tasks);
  const auto by_lct = order_by(tasks, [](const Window& w) { return w.lct; });
  const int n = static_cast<int>(tasks.size());
  std::vector<Time> est(tasks.size());
  for (int j = 0; j < n; ++j) {
    Time best = tasks[static_cast<std::size_t>(j)].est;
    JobSet omega;
    for (std::size_t a = 0; a < by_lct.size(); ++a) {
      const int k = by_lct[a];
      if (k == j) continue;
      omega = omega.with(k);
      const Time L = tasks[static_cast<std::size_t>(k)].lct;
      // close the group of equal lct before testing
      std::size_t b = a + 1;
      while (b < by_lct.size() && by_lct[b] == j) ++b;
      if (b < by_lct.size() && tasks[static_cast<std::size_t>(by_lct[b])].lct == L) continue;
      if (ect_sorted(tasks, by_est, omega.with(j)) > L) best = std::max(best, ect_sorted(tasks, by_est, omega));
    }
    est[static_cast<std::size_t>(j)] = best;
  }
  return est;
}

}  // namespace

Time envelope_ect(std::span<const Window> tasks, JobSet omega) {
  return ect_sorted(tasks, est_desc(tasks), omega);
}

Time envelope_lst(std::span<const Window> tasks, JobSet omega) {
  return lst_sorted(tasks, order_by(tasks, [](const Window& w) { return w.lct; }), omega);
}

bool overload_feasible(std::span<const Window> tasks) {
  const auto by_est = est_desc(tasks);
  const auto by_lct = order_by(tasks, [](const Window& w) { return w.lct; });
  JobSet omega;
  for (std::size_t a = 0; a < by_lct.size(); ++a) {
    omega = omega.with(by_lct[a]);
    const Time L = tasks[static_cast<std::size_t>(by_lct[a])].lct;
    if (a + 1 < by_lct.size() && tasks[static_cast<std::size_t>(by_lct[a + 1])].lct == L) continue;
    if (ect_sorted(tasks, by_est, omega) > L) return false;
  }
  return true;
}

BoundUpdate detectable_precedences(std::span<const Window> tasks) {
  BoundUpdate u = unchanged(tasks);
  u.est = detectable_lower(tasks);
  const auto m = detectable_lower(mirrored(tasks));
  for (std::size_t i = 0; i < tasks.size(); ++i) u.lct[i] = -m[i];
  return u;
}

BoundUpdate edge_finding(std::span<const Window> tasks) {
  BoundUpdate u = unchanged(tasks);
  u.est = edge_finding_lower(tasks);
  const auto m = edge_finding_lower(mirrored(tasks));
  for (std::size_t i = 0; i < tasks.size(); ++i) u.lct[i] = -m[i];
  return u;
}

// ECT(Omega) > lst_j with j not in Omega: j cannot be last, so it ends before
// the latest start of some task in Omega.
BoundUpdate not_last(std::span<const Window> tasks) {
  BoundUpdate u = unchanged(tasks);
  const auto by_est = est_desc(tasks);
  const auto by_lst = order_by(tasks, [](const Window& w) { return w.lst(); });
  const int n = static_cast<int>(tasks.size());
  for (int j = 0; j < n; ++j) {
    const auto& tj = tasks[static_cast<std::size_t>(j)];
    JobSet omega;
    for (std::size_t a = 0; a < by_lst.size(); ++a) {
      const int k = by_lst[a];
      if (k == j) continue;
      omega = omega.with(k);
      const Time L = tasks[static_cast<std::size_t>(k)].lst();
      std::size_t b = a + 1;
      while (b < by_lst.size() && by_lst[b] == j) ++b;
      if (b < by_lst.size() && tasks[static_cast<std::size_t>(by_lst[b])].lst() == L) continue;
      if (L >= tj.lct) break;
      if (ect_sorted(tasks, by_est, omega) > tj.lst()) {
        u.lct[static_cast<std::size_t>(j)] = L;
        break;
      }
    }
  }
  return u;
}

// LST(Omega) < ect_j with j not in Omega: j cannot be first, so it starts
// after the earliest completion of some task in Omega.
BoundUpdate not_first(std::span<const Window> tasks) {
  BoundUpdate u = unchanged(tasks);
  const auto by_lct = order_by(tasks, [](const Window& w) { return w.lct; });
  const auto by_ect = order_by(tasks, [](const Window& w) { return -w.ect(); });
  const int n = static_cast<int>(tasks.size());
  for (int j = 0; j < n; ++j) {
    const auto& tj = tasks[static_cast<std::size_t>(j)];
    JobSet omega;
    for (std::size_t a = 0; a < by_ect.size(); ++a) {
      const int k = by_ect[a];
      if (k == j) continue;
      omega = omega.with(k);
      const Time E = tasks[static_cast<std::size_t>(k)].ect();
      std::size_t b = a + 1;
      while (b < by_ect.size() && by_ect[b] == j) ++b;
      if (b < by_ect.size() && tasks[static_cast<std::size_t>(by_ect[b])].ect() == E) continue;
      if (E <= tj.est) break;
      if (lst_sorted(tasks, by_lct, omega) < tj.ect()) {
        u.est[static_cast<std::size_t>(j)] = E;
        break;
      }
    }
  }
  return u;
}

std::vector<Window> task_windows(const Instance& instance, const DomainStore& store) {
  return windows_from(instance, store).jobs;
}

PropStatus apply_bounds(const Instance& instance, DomainStore& store, const BoundUpdate& u) {
  if (!u.feasible) return PropStatus::Infeasible;
  for (int j = 0; j < instance.size(); ++j) {
    if (failed(store.tighten_lower(j, u.est[static_cast<std::size_t>(j)]))) return PropStatus::Infeasible;
    if (failed(store.tighten_upper(j, u.lct[static_cast<std::size_t>(j)] - instance.job(j).p)))
      return PropStatus::Infeasible;
  }
  return PropStatus::Feasible;
}

PropStatus overload_check(const Instance& instance, DomainStore& store) {
  return overload_feasible(task_windows(instance, store)) ? PropStatus::Feasible : PropStatus::Infeasible;
}

PropStatus detectable_precedences(const Instance& instance, DomainStore& store) {
  return apply_bounds(instance, store, detectable_precedences(task_windows(instance, store)));
}

PropStatus not_first_not_last(const Instance& instance, DomainStore& store) {
  if (apply_bounds(instance, store, not_first(task_windows(instance, store))) == PropStatus::Infeasible)
    return PropStatus::Infeasible;
  return apply_bounds(instance, store, not_last(task_windows(instance, store)));
}

PropStatus edge_finding(const Instance& instance, DomainStore& store) {
  return apply_bounds(instance, store, edge_finding(task_windows(instance, store)));
}

PropStatus ClassicNoOverlap::propagate(DomainStore& store) {
  for (;;) {
    const auto before = store.events();
    if (overload_check(instance_, store) == PropStatus::Infeasible) return PropStatus::Infeasible;
    if (detectable_precedences(instance_, store) == PropStatus::Infeasible) return PropStatus::Infeasible;
    if (not_first_not_last(instance_, store) == PropStatus::Infeasible) return PropStatus::Infeasible;
    if (edge_finding(instance_, store) == PropStatus::Infeasible) return PropStatus::Infeasible;
    if (store.events() == before) return PropStatus::Feasible;
  }
}

}  // namespace nomdd
