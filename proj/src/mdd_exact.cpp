#include "nomdd/mdd_exact.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace nomdd {

namespace {

struct StateKey {
  std::uint64_t bits;
  Time est;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::uint64_t h = k.bits * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(k.est) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

struct RawEdge {
  std::uint32_t from;  // index within layer k
  std::uint32_t to;    // index within layer k + 1
  JobId label;
};

std::string job_list(JobSet s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](JobId j) {
    if (!first) out += ',';
    out += std::to_string(j + 1);
    first = false;
  });
  return out + "}";
}

}  // namespace

Time min_lst(const Windows& w, JobSet placed) {
  Time m = kTimeMax;
  (JobSet::full(w.size()) - placed).for_each([&](JobId j) { m = std::min(m, w[j].lst()); });
  return m;
}

JobSet lambda(const ExactState& s, const Windows& w) {
  JobSet out;
  for (JobId i = 0; i < w.size(); ++i) {
    if (s.placed.contains(i)) continue;
    if (std::max(s.est, w[i].est) + w[i].p > w[i].lct) continue;
    out = out.with(i);
  }
  return out;
}

ExactState tau(const ExactState& s, JobId i, const Windows& w) {
  const JobSet placed = s.placed.with(i);
  if (placed == JobSet::full(w.size())) return {placed, w.horizon};
  return {placed, std::max(s.est, w[i].est) + w[i].p};
}

std::vector<std::uint32_t> ExactMdd::layer(int k) const {
  std::vector<std::uint32_t> out;
  if (empty()) return out;
  for (auto id = layer_begin_[static_cast<std::size_t>(k)]; id < layer_begin_[static_cast<std::size_t>(k) + 1]; ++id)
    out.push_back(id);
  return out;
}

std::size_t ExactMdd::width() const {
  std::size_t w = 0;
  for (std::size_t k = 0; k + 1 < layer_begin_.size(); ++k) w = std::max<std::size_t>(w, layer_begin_[k + 1] - layer_begin_[k]);
  return w;
}

ExactMdd compile_exact(const Windows& w) {
  const int n = w.size();
  ExactMdd mdd;
  mdd.n_ = n;

  std::vector<std::vector<ExactState>> layers(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<RawEdge>> raw(static_cast<std::size_t>(n));
  layers[0].push_back({JobSet{}, 0});
  mdd.peak_width_ = 1;

  for (int k = 0; k < n; ++k) {
    auto& cur = layers[static_cast<std::size_t>(k)];
    auto& next = layers[static_cast<std::size_t>(k) + 1];
    std::unordered_map<StateKey, std::uint32_t, StateKeyHash> index;
    for (std::uint32_t u = 0; u < cur.size(); ++u) {
      lambda(cur[u], w).for_each([&](JobId i) {
        const ExactState t = tau(cur[u], i, w);
        // Dead end: some job still to place can no longer start in time.
        if (t.est > min_lst(w, t.placed)) return;
        auto [it, fresh] = index.try_emplace(StateKey{t.placed.bits(), t.est}, static_cast<std::uint32_t>(next.size()));
        if (fresh) next.push_back(t);
        raw[static_cast<std::size_t>(k)].push_back({u, it->second, i});
      });
    }
    mdd.peak_width_ = std::max(mdd.peak_width_, next.size());
    if (next.empty()) return mdd;
  }

  // Bottom-up: keep a node iff one of its edges reaches a kept node.
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(n) + 1);
  alive[static_cast<std::size_t>(n)].assign(layers[static_cast<std::size_t>(n)].size(), 1);
  for (int k = n - 1; k >= 0; --k) {
    auto& a = alive[static_cast<std::size_t>(k)];
    a.assign(layers[static_cast<std::size_t>(k)].size(), 0);
    for (const auto& e : raw[static_cast<std::size_t>(k)])
      if (alive[static_cast<std::size_t>(k) + 1][e.to]) a[e.from] = 1;
  }
  if (!alive[0][0]) return mdd;

  // Compact to global ids, layer by layer.
  std::vector<std::vector<std::uint32_t>> gid(static_cast<std::size_t>(n) + 1);
  mdd.layer_begin_.push_back(0);
  for (int k = 0; k <= n; ++k) {
    const auto& L = layers[static_cast<std::size_t>(k)];
    auto& g = gid[static_cast<std::size_t>(k)];
    g.assign(L.size(), UINT32_MAX);
    for (std::size_t u = 0; u < L.size(); ++u) {
      if (!alive[static_cast<std::size_t>(k)][u]) continue;
      g[u] = static_cast<std::uint32_t>(mdd.nodes_.size());
      mdd.nodes_.push_back({L[u], k, 0, 0});
    }
    mdd.layer_begin_.push_back(static_cast<std::uint32_t>(mdd.nodes_.size()));
  }
  for (int k = 0; k < n; ++k) {
    auto es = raw[static_cast<std::size_t>(k)];
    std::stable_sort(es.begin(), es.end(), [](const RawEdge& a, const RawEdge& b) { return a.from < b.from; });
    for (const auto& e : es) {
      const auto f = gid[static_cast<std::size_t>(k)][e.from];
      const auto t = gid[static_cast<std::size_t>(k) + 1][e.to];
      if (f == UINT32_MAX || t == UINT32_MAX) continue;
      auto& node = mdd.nodes_[f];
      if (node.out_count == 0) node.first_out = static_cast<std::uint32_t>(mdd.edges_.size());
      ++node.out_count;
      mdd.edges_.push_back({f, t, e.label});
    }
  }
  return mdd;
}

ExactMdd compile_exact(const Instance& instance, const DomainStore& store) {
  return compile_exact(windows_from(instance, store));
}

StartFilter bc_filter(const ExactMdd& mdd, const Windows& w) {
  StartFilter out;
  const int n = w.size();
  out.est.resize(static_cast<std::size_t>(n));
  if (mdd.empty()) {
    out.feasible = false;
    return out;
  }
  std::vector<Time> best(static_cast<std::size_t>(n), kTimeMax);
  const auto& nodes = mdd.nodes();
  for (const auto& e : mdd.edges()) {
    ++out.edge_visits;
    auto& b = best[static_cast<std::size_t>(e.label)];
    b = std::min(b, nodes[e.from].state.est);
  }
  for (JobId i = 0; i < n; ++i) {
    const Time b = best[static_cast<std::size_t>(i)];
    if (b == kTimeMax) out.feasible = false;
    out.est[static_cast<std::size_t>(i)] = std::max(w[i].est, b);
  }
  return out;
}

BcBounds exact_bc(const Windows& w) {
  BcBounds out;
  out.windows = w;
  const ExactMdd fwd = compile_exact(w);
  out.peak_width = fwd.peak_width();
  out.edges = fwd.edges().size();
  const StartFilter s = bc_filter(fwd, w);
  if (!s.feasible) {
    out.feasible = false;
    return out;
  }
  for (JobId i = 0; i < w.size(); ++i) out.windows[i].est = s.est[static_cast<std::size_t>(i)];

  const Windows m = mirror(out.windows);
  const ExactMdd back = compile_exact(m);
  out.peak_width = std::max(out.peak_width, back.peak_width());
  const StartFilter e = bc_filter(back, m);
  if (!e.feasible) {
    out.feasible = false;
    return out;
  }
  for (JobId i = 0; i < w.size(); ++i)
    out.windows[i].lct = std::min(out.windows[i].lct, w.horizon - e.est[static_cast<std::size_t>(i)]);
  return out;
}

std::uint64_t count_paths(const ExactMdd& mdd) {
  if (mdd.empty()) return 0;
  std::vector<std::uint64_t> paths(mdd.nodes().size(), 0);
  paths[0] = 1;
  for (const auto& e : mdd.edges()) {
    const std::uint64_t add = paths[e.from];
    paths[e.to] = (paths[e.to] > UINT64_MAX - add) ? UINT64_MAX : paths[e.to] + add;
  }
  return paths.back();
}

std::vector<std::vector<JobId>> enumerate_paths(const ExactMdd& mdd, std::size_t limit) {
  std::vector<std::vector<JobId>> out;
  if (mdd.empty()) return out;
  std::vector<JobId> prefix;
  const auto& nodes = mdd.nodes();
  const auto& edges = mdd.edges();
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t u) {
    if (out.size() >= limit) return;
    const auto& node = nodes[u];
    if (node.layer == mdd.jobs()) {
      out.push_back(prefix);
      return;
    }
    for (auto k = node.first_out; k < node.first_out + node.out_count; ++k) {
      prefix.push_back(edges[k].label);
      walk(edges[k].to);
      prefix.pop_back();
    }
  };
  walk(0);
  return out;
}

PrecedenceSet extract_precedences(const ExactMdd& mdd) {
  const int n = mdd.jobs();
  PrecedenceSet prec(n);
  const JobSet all = JobSet::full(n);
  std::vector<JobSet> succ(static_cast<std::size_t>(n));
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)] = all.without(i);
  // A node with j placed and i still to come (A_up = J \ A_down) refutes i < j.
  for (const auto& node : mdd.nodes()) {
    const JobSet placed = node.state.placed;
    (all - placed).for_each([&](JobId i) { succ[static_cast<std::size_t>(i)] = succ[static_cast<std::size_t>(i)] - placed; });
  }
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)].for_each([&](JobId j) { prec.add(i, j); });
  return prec;
}

std::string to_dot(const ExactMdd& mdd) {
  std::ostringstream os;
  os << "digraph exact {\n  rankdir=TB;\n";
  for (std::size_t u = 0; u < mdd.nodes().size(); ++u) {
    const auto& s = mdd.nodes()[u].state;
    os << "  n" << u << " [label=\"" << job_list(s.placed) << ", " << s.est << "\"];\n";
  }
  for (const auto& e : mdd.edges()) os << "  n" << e.from << " -> n" << e.to << " [label=\"t" << e.label + 1 << "\"];\n";
  os << "}\n";
  return os.str();
}

PropStatus ExactBcPropagator::propagate(DomainStore& store) {
  const BcBounds bc = exact_bc(windows_from(instance_, store));
  max_width_ = std::max(max_width_, bc.peak_width);
  if (!bc.feasible) return PropStatus::Infeasible;
  for (JobId j = 0; j < instance_.size(); ++j) {
    const auto& w = bc.windows[j];
    if (failed(store.tighten_lower(j, w.est))) return PropStatus::Infeasible;
    if (failed(store.tighten_upper(j, w.lct - w.p))) return PropStatus::Infeasible;
  }
  return PropStatus::Feasible;
}

}  // namespace nomdd
