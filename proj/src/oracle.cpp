#include "nomdd/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace nomdd {

namespace {

// Convex piecewise-linear function over integers on [a, b]: value va at a,
// slope s0 just right of a, and one unit of extra slope after each breakpoint.
struct Convex {
  Time a = 0;
  Time b = 0;
  Cost va = 0;
  Cost s0 = 0;
  std::vector<Time> bp;  // sorted, all > a

  Cost at(Time x) const {
    Cost v = va + s0 * (x - a);
    for (const Time q : bp)
      if (q < x) v += x - q;
    return v;
  }

  void add_abs(Time d) {
    va += std::abs(a - d);
    if (d <= a) {
      s0 += 1;
    } else {
      s0 -= 1;
      const auto it = std::upper_bound(bp.begin(), bp.end(), d);
      bp.insert(bp.insert(it, d), d);
    }
  }

  // g(y) = min over x <= y of f(x), on [a, +inf).
  void prefix_min() {
    std::vector<Time> kept;
    Cost slope = s0;
    for (const Time q : bp) {
      if (slope >= 0 || q >= b) break;
      kept.push_back(q);
      ++slope;
    }
    while (slope < 0) {
      kept.push_back(b);
      ++slope;
    }
    bp = std::move(kept);
    s0 = std::min<Cost>(s0, 0);
    b = kTimeMax;
  }

  void shift(Time p) {
    a += p;
    for (auto& q : bp) q += p;
  }

  bool restrict_to(Time lo, Time hi) {
    const Time na = std::max(a, lo);
    const Time nb = std::min(b, hi);
    if (na > nb) return false;
    va = at(na);
    auto it = bp.begin();
    while (it != bp.end() && *it <= na) {
      ++s0;
      ++it;
    }
    bp.erase(bp.begin(), it);
    while (!bp.empty() && bp.back() >= nb) bp.pop_back();
    a = na;
    b = nb;
    return true;
  }

  Cost minimum() const {
    Cost best = std::min(at(a), at(b));
    for (const Time q : bp) best = std::min(best, at(q));
    return best;
  }
};

void check_size(int n) {
  if (n > kOracleMaxJobs)
    throw OracleTooLarge("oracle limited to " + std::to_string(kOracleMaxJobs) + " jobs, got " + std::to_string(n));
}

}  // namespace

std::optional<std::vector<Time>> greedy_schedule(const Windows& w, std::span<const JobId> order) {
  std::vector<Time> start(static_cast<std::size_t>(w.size()), 0);
  Time t = 0;
  for (const JobId j : order) {
    const Time s = std::max(t, w[j].est);
    if (s + w[j].p > w[j].lct) return std::nullopt;
    start[static_cast<std::size_t>(j)] = s;
    t = s + w[j].p;
  }
  return start;
}

std::vector<Time> latest_schedule(const Windows& w, std::span<const JobId> order) {
  std::vector<Time> start(static_cast<std::size_t>(w.size()), 0);
  Time t = kTimeMax;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const JobId j = *it;
    const Time e = std::min(t, w[j].lct);
    start[static_cast<std::size_t>(j)] = e - w[j].p;
    t = e - w[j].p;
  }
  return start;
}

std::optional<Cost> timing_by_enumeration(const Instance& instance, const Windows& w, std::span<const JobId> order) {
  Time top = 0;
  for (const auto& job : w.jobs) top = std::max(top, job.lct);
  const auto size = static_cast<std::size_t>(top) + 1;
  constexpr Cost inf = kTimeMax;
  // best[t]: cheapest prefix whose last job ends at or before t
  std::vector<Cost> best(size, 0);
  bool first = true;
  for (const JobId j : order) {
    const auto& win = w[j];
    const Time d = instance.job(j).d;
    std::vector<Cost> ends(size, inf);
    for (Time e = std::max<Time>(win.est + win.p, 0); e <= win.lct; ++e) {
      const Time prev = e - win.p;
      const Cost before = first ? 0 : (prev >= 0 ? best[static_cast<std::size_t>(prev)] : inf);
      if (before == inf) continue;
      ends[static_cast<std::size_t>(e)] = before + std::abs(e - d);
    }
    for (std::size_t t = 1; t < size; ++t) ends[t] = std::min(ends[t], ends[t - 1]);
    best = std::move(ends);
    first = false;
  }
  if (best.back() == inf) return std::nullopt;
  return best.back();
}

std::optional<Cost> timing_by_sweep(const Instance& instance, const Windows& w, std::span<const JobId> order) {
  if (order.empty()) return 0;
  Convex f;
  bool first = true;
  for (const JobId j : order) {
    const auto& win = w[j];
    if (first) {
      f.a = win.est + win.p;
      f.b = win.lct;
      if (f.a > f.b) return std::nullopt;
      first = false;
    } else {
      f.prefix_min();
      f.shift(win.p);
      if (!f.restrict_to(win.est + win.p, win.lct)) return std::nullopt;
    }
    f.add_abs(instance.job(j).d);
  }
  return f.minimum();
}

Cost oracle_optimum_for_permutation(const Instance& instance, const Windows& w, std::span<const JobId> order) {
  if (!greedy_schedule(w, order)) throw InfeasibleSchedule("order violates a deadline");
  const auto cost = order.size() <= 6 ? timing_by_enumeration(instance, w, order) : timing_by_sweep(instance, w, order);
  if (!cost) throw InfeasibleSchedule("order violates a deadline");
  return *cost;
}

Cost oracle_optimum_for_permutation(const Instance& instance, std::span<const JobId> order) {
  return oracle_optimum_for_permutation(instance, instance.windows(), order);
}

OracleReport oracle_report(const Instance& instance, const std::optional<Windows>& windows, OracleOptions options) {
  const int n = instance.size();
  check_size(n);
  const Windows w = windows ? *windows : instance.windows();

  OracleReport rep;
  rep.n = n;
  rep.min_start.assign(static_cast<std::size_t>(n), kTimeMax);
  rep.max_end.assign(static_cast<std::size_t>(n), kTimeMin);
  const JobSet all = JobSet::full(n);
  std::vector<JobSet> succ(static_cast<std::size_t>(n));
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)] = all.without(i);

  std::vector<JobId> order;
  std::vector<Time> start(static_cast<std::size_t>(n), 0);
  auto leaf = [&] {
    ++rep.feasible_count;
    const auto late = latest_schedule(w, order);
    JobSet before;
    for (const JobId j : order) {
      const auto k = static_cast<std::size_t>(j);
      rep.min_start[k] = std::min(rep.min_start[k], start[k]);
      rep.max_end[k] = std::max(rep.max_end[k], late[k] + w[j].p);
      succ[k] = succ[k] - before;
      before = before.with(j);
    }
    if (options.optimum) {
      const auto c = n <= 6 ? timing_by_enumeration(instance, w, order) : timing_by_sweep(instance, w, order);
      if (c && (!rep.optimum || *c < *rep.optimum)) rep.optimum = *c;
    }
    if (options.keep_permutations) rep.feasible.push_back(order);
  };
  auto dfs = [&](auto&& self, JobSet placed, Time t) -> void {
    if (placed == all) {
      leaf();
      return;
    }
    (all - placed).for_each([&](JobId j) {
      const Time s = std::max(t, w[j].est);
      if (s + w[j].p > w[j].lct) return;
      start[static_cast<std::size_t>(j)] = s;
      order.push_back(j);
      self(self, placed.with(j), s + w[j].p);
      order.pop_back();
    });
  };
  dfs(dfs, JobSet{}, 0);

  rep.precedences = PrecedenceSet(n);
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)].for_each([&](JobId j) { rep.precedences.add(i, j); });
  if (rep.infeasible()) {
    rep.min_start.clear();
    rep.max_end.clear();
    rep.optimum.reset();
  }
  return rep;
}

std::string format_report(const OracleReport& r) {
  std::ostringstream os;
  os << "n " << r.n << '\n' << "feasible " << r.feasible_count << '\n';
  if (r.infeasible()) {
    os << "infeasible\n";
    return os.str();
  }
  os << "min_start";
  for (const Time t : r.min_start) os << ' ' << t;
  os << "\nmax_end";
  for (const Time t : r.max_end) os << ' ' << t;
  os << "\nprecedences";
  for (const auto& [i, j] : r.precedences.pairs()) os << ' ' << i + 1 << '<' << j + 1;
  os << '\n';
  if (r.optimum) os << "optimum " << *r.optimum << '\n';
  return os.str();
}

}  // namespace nomdd
