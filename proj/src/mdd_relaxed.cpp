#include "nomdd/mdd_relaxed.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

namespace nomdd {

namespace {

auto key_of(const DownState& s) { return std::tuple(s.A.bits(), s.S.bits(), s.est, s.K); }

UpState neutral_up(const Windows& w) { return {JobSet{}, JobSet::full(w.size()), w.horizon}; }

UpState sink_up(const Windows& w) { return {JobSet{}, JobSet{}, w.horizon}; }

UpState up_through(const UpState& to, JobId j, const Windows& w) {
  return {to.A.with(j), to.S.with(j), std::min(w[j].lct, to.lst) - w[j].p};
}

void kill_edge(RelaxedMdd& mdd, std::uint32_t e) { mdd.edges[e].alive = false; }

void kill_node(RelaxedMdd& mdd, std::uint32_t u) {
  auto& node = mdd.nodes[u];
  node.alive = false;
  for (const auto e : node.in) kill_edge(mdd, e);
  for (const auto e : node.out) kill_edge(mdd, e);
  if (node.layer == 0 || node.layer == mdd.n) mdd.infeasible = true;
}

std::uint32_t add_node(RelaxedMdd& mdd, const DownState& down, const UpState& up, int layer) {
  const auto id = static_cast<std::uint32_t>(mdd.nodes.size());
  mdd.nodes.push_back({down, up, layer, true, {}, {}});
  mdd.layers[static_cast<std::size_t>(layer)].push_back(id);
  return id;
}

std::uint32_t add_edge(RelaxedMdd& mdd, std::uint32_t from, std::uint32_t to, JobId label) {
  const auto id = static_cast<std::uint32_t>(mdd.edges.size());
  mdd.edges.push_back({from, to, label, true});
  mdd.nodes[from].out.push_back(id);
  mdd.nodes[to].in.push_back(id);
  return id;
}

// Down states reached through the alive incoming edges of u differ.
bool is_relaxed(const RelaxedMdd& mdd, std::uint32_t u, const Windows& w) {
  std::optional<DownState> first;
  for (const auto e : mdd.nodes[u].in) {
    const auto& edge = mdd.edges[e];
    if (!edge.alive) continue;
    const DownState t = tau_relaxed(mdd.nodes[edge.from].down, edge.label, w);
    if (!first) first = t;
    else if (!(*first == t)) return true;
  }
  return false;
}

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

JobSet lambda_relaxed(const DownState& s, const Windows& w) {
  JobSet out;
  const bool exact = s.S.size() == s.K;
  for (JobId i = 0; i < w.size(); ++i) {
    if (s.A.contains(i)) continue;
    if (exact && s.S.contains(i)) continue;
    if (std::max(s.est, w[i].est) + w[i].p > w[i].lct) continue;
    out = out.with(i);
  }
  return out;
}

DownState tau_relaxed(const DownState& s, JobId i, const Windows& w) {
  const int n = w.size();
  if (s.K + 1 == n) return {JobSet::full(n), JobSet::full(n), w.horizon, n};
  return {s.A.with(i), s.S.with(i), std::max(s.est, w[i].est) + w[i].p, s.K + 1};
}

DownState merge(const DownState& a, const DownState& b) {
  if (a.K != b.K) std::abort();
  return {a.A & b.A, a.S | b.S, std::min(a.est, b.est), a.K};
}

UpState merge(const UpState& a, const UpState& b) { return {a.A & b.A, a.S | b.S, std::max(a.lst, b.lst)}; }

RelaxedState merge(const RelaxedState& a, const RelaxedState& b) {
  return {merge(a.down, b.down), merge(a.up, b.up)};
}

std::vector<int> bucket_assign(const std::vector<DownState>& states, int W) {
  std::vector<int> group(states.size());
  if (states.size() <= static_cast<std::size_t>(W)) {
    // keep every state, numbered by (est, position)
    std::vector<int> idx(states.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return states[static_cast<std::size_t>(a)].est < states[static_cast<std::size_t>(b)].est;
    });
    for (std::size_t r = 0; r < idx.size(); ++r) group[static_cast<std::size_t>(idx[r])] = static_cast<int>(r);
    return group;
  }

  std::vector<Time> values;
  for (const auto& s : states) values.push_back(s.est);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  if (values.size() <= static_cast<std::size_t>(W)) {
    for (std::size_t i = 0; i < states.size(); ++i)
      group[i] = static_cast<int>(std::lower_bound(values.begin(), values.end(), states[i].est) - values.begin());
    return group;
  }

  const Time lo = values.front();
  const Time range = values.back() - lo;
  std::vector<int> raw(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    raw[i] = static_cast<int>(std::min<Time>(W - 1, (states[i].est - lo) * W / range));
  std::vector<int> used(raw);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (std::size_t i = 0; i < states.size(); ++i)
    group[i] = static_cast<int>(std::lower_bound(used.begin(), used.end(), raw[i]) - used.begin());
  return group;
}

std::vector<DownState> bucket_layer(const std::vector<DownState>& states, int W) {
  std::vector<DownState> distinct;
  std::map<decltype(key_of(DownState{})), std::size_t> seen;
  for (const auto& s : states)
    if (seen.try_emplace(key_of(s), distinct.size()).second) distinct.push_back(s);
  const auto group = bucket_assign(distinct, W);
  const int groups = distinct.empty() ? 0 : *std::max_element(group.begin(), group.end()) + 1;
  std::vector<std::optional<DownState>> folded(static_cast<std::size_t>(groups));
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    auto& f = folded[static_cast<std::size_t>(group[i])];
    f = f ? merge(*f, distinct[i]) : distinct[i];
  }
  std::vector<DownState> out;
  for (auto& f : folded) out.push_back(*f);
  return out;
}

std::vector<std::uint32_t> RelaxedMdd::layer(int k) const {
  std::vector<std::uint32_t> out;
  for (const auto u : layers[static_cast<std::size_t>(k)])
    if (nodes[u].alive) out.push_back(u);
  return out;
}

std::size_t RelaxedMdd::layer_width(int k) const {
  std::size_t c = 0;
  for (const auto u : layers[static_cast<std::size_t>(k)]) c += nodes[u].alive ? 1 : 0;
  return c;
}

std::size_t RelaxedMdd::width() const {
  std::size_t w = 0;
  for (int k = 0; k < static_cast<int>(layers.size()); ++k) w = std::max(w, layer_width(k));
  return w;
}

std::size_t RelaxedMdd::edge_count() const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.alive; }));
}

std::size_t RelaxedMdd::node_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& u) { return u.alive; }));
}

RelaxedMdd compile_relaxed(const Windows& w, int W) {
  const int n = w.size();
  RelaxedMdd mdd;
  mdd.n = n;
  mdd.width_cap = std::max(1, W);
  mdd.layers.resize(static_cast<std::size_t>(n) + 1);
  add_node(mdd, DownState{}, neutral_up(w), 0);

  for (int k = 0; k < n; ++k) {
    struct Candidate {
      std::uint32_t from;
      JobId label;
      std::size_t state;
    };
    std::vector<Candidate> cands;
    std::vector<DownState> distinct;
    std::map<decltype(key_of(DownState{})), std::size_t> seen;
    for (const auto u : mdd.layers[static_cast<std::size_t>(k)]) {
      const DownState& s = mdd.nodes[u].down;
      lambda_relaxed(s, w).for_each([&](JobId i) {
        const DownState t = tau_relaxed(s, i, w);
        auto [it, fresh] = seen.try_emplace(key_of(t), distinct.size());
        if (fresh) distinct.push_back(t);
        cands.push_back({u, i, it->second});
      });
    }
    if (distinct.empty()) {
      mdd.infeasible = true;
      return mdd;
    }

    const auto group = bucket_assign(distinct, mdd.width_cap);
    const int groups = *std::max_element(group.begin(), group.end()) + 1;
    std::vector<std::optional<DownState>> folded(static_cast<std::size_t>(groups));
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      auto& f = folded[static_cast<std::size_t>(group[i])];
      f = f ? merge(*f, distinct[i]) : distinct[i];
    }
    std::vector<std::uint32_t> ids;
    const UpState up = (k + 1 == n) ? sink_up(w) : neutral_up(w);
    for (const auto& f : folded) ids.push_back(add_node(mdd, *f, up, k + 1));
    for (const auto& c : cands) add_edge(mdd, c.from, ids[static_cast<std::size_t>(group[c.state])], c.label);
  }

  update(mdd, w);
  return mdd;
}

RelaxedMdd compile_relaxed(const Instance& instance, const DomainStore& store, int W) {
  return compile_relaxed(windows_from(instance, store), W);
}

bool edge_check(const RelaxedMdd& mdd, std::uint32_t edge, const Windows& w) {
  const auto& e = mdd.edges[edge];
  const auto& from = mdd.nodes[e.from];
  const auto& to = mdd.nodes[e.to];
  const JobId j = e.label;
  if (from.down.A.contains(j)) return false;
  if (from.down.S.size() == from.down.K && from.down.S.contains(j)) return false;
  if (to.up.A.contains(j)) return false;
  if (to.up.S.size() == mdd.n - to.layer && to.up.S.contains(j)) return false;
  return std::max(from.down.est, w[j].est) + w[j].p <= std::min(w[j].lct, to.up.lst);
}

bool update_down(RelaxedMdd& mdd, const Windows& w) {
  if (mdd.infeasible) return false;
  bool changed = false;
  for (int k = 1; k <= mdd.n && !mdd.infeasible; ++k) {
    for (const auto u : mdd.layers[static_cast<std::size_t>(k)]) {
      if (!mdd.nodes[u].alive) continue;
      std::optional<DownState> acc;
      for (const auto e : mdd.nodes[u].in) {
        if (!mdd.edges[e].alive) continue;
        if (!edge_check(mdd, e, w)) {
          kill_edge(mdd, e);
          changed = true;
          continue;
        }
        const auto& edge = mdd.edges[e];
        const DownState t = tau_relaxed(mdd.nodes[edge.from].down, edge.label, w);
        acc = acc ? merge(*acc, t) : t;
      }
      if (!acc) {
        kill_node(mdd, u);
        changed = true;
      } else if (!(*acc == mdd.nodes[u].down)) {
        mdd.nodes[u].down = *acc;
        changed = true;
      }
    }
  }
  return changed;
}

bool update_up(RelaxedMdd& mdd, const Windows& w) {
  if (mdd.infeasible) return false;
  bool changed = false;
  for (int k = mdd.n - 1; k >= 0 && !mdd.infeasible; --k) {
    for (const auto u : mdd.layers[static_cast<std::size_t>(k)]) {
      if (!mdd.nodes[u].alive) continue;
      std::optional<UpState> acc;
      for (const auto e : mdd.nodes[u].out) {
        if (!mdd.edges[e].alive) continue;
        if (!edge_check(mdd, e, w)) {
          kill_edge(mdd, e);
          changed = true;
          continue;
        }
        const auto& edge = mdd.edges[e];
        const UpState t = up_through(mdd.nodes[edge.to].up, edge.label, w);
        acc = acc ? merge(*acc, t) : t;
      }
      if (!acc) {
        kill_node(mdd, u);
        changed = true;
      } else if (!(*acc == mdd.nodes[u].up)) {
        mdd.nodes[u].up = *acc;
        changed = true;
      }
    }
  }
  return changed;
}

bool update(RelaxedMdd& mdd, const Windows& w) {
  bool any = false;
  for (;;) {
    const bool up = update_up(mdd, w);
    const bool down = update_down(mdd, w);
    any = any || up || down;
    if (mdd.infeasible || (!up && !down)) return any;
  }
}

int refine(RelaxedMdd& mdd, const Windows& w, int budget) {
  int splits = 0;
  while (splits < budget && !mdd.infeasible) {
    // Shallowest layer with spare width that holds a relaxed node; within it
    // the node with the most uncertain job set.
    std::optional<std::uint32_t> pick;
    for (int k = 1; k < mdd.n && !pick; ++k) {
      if (mdd.layer_width(k) >= static_cast<std::size_t>(mdd.width_cap)) continue;
      int best = -1;
      for (const auto u : mdd.layers[static_cast<std::size_t>(k)]) {
        if (!mdd.nodes[u].alive || !is_relaxed(mdd, u, w)) continue;
        const int spread = (mdd.nodes[u].down.S - mdd.nodes[u].down.A).size();
        if (spread > best) {
          best = spread;
          pick = u;
        }
      }
    }
    if (!pick) break;
    const std::uint32_t u = *pick;

    // Extract the incoming edge whose own state is furthest from the merge.
    std::optional<std::uint32_t> take;
    DownState state;
    Time gap = -1;
    for (const auto e : mdd.nodes[u].in) {
      const auto& edge = mdd.edges[e];
      if (!edge.alive) continue;
      const DownState t = tau_relaxed(mdd.nodes[edge.from].down, edge.label, w);
      if (t == mdd.nodes[u].down) continue;
      if (t.est - mdd.nodes[u].down.est > gap) {
        gap = t.est - mdd.nodes[u].down.est;
        take = e;
        state = t;
      }
    }
    if (!take) break;

    const std::uint32_t v = add_node(mdd, state, neutral_up(w), mdd.nodes[u].layer);
    auto& in = mdd.nodes[u].in;
    in.erase(std::find(in.begin(), in.end(), *take));
    mdd.edges[*take].to = v;
    mdd.nodes[v].in.push_back(*take);

    const auto outs = mdd.nodes[u].out;  // add_edge may reallocate
    for (const auto e : outs) {
      if (!mdd.edges[e].alive) continue;
      const auto to = mdd.edges[e].to;
      const JobId label = mdd.edges[e].label;
      const auto copy = add_edge(mdd, v, to, label);
      if (!edge_check(mdd, copy, w)) kill_edge(mdd, copy);
    }
    ++splits;
    update(mdd, w);
  }
  return splits;
}

RelaxedBounds relaxed_bc_filter(const RelaxedMdd& mdd, const Windows& w) {
  RelaxedBounds out;
  out.windows = w;
  if (mdd.infeasible) {
    out.feasible = false;
    return out;
  }
  const auto n = static_cast<std::size_t>(w.size());
  std::vector<Time> first(n, kTimeMax);
  std::vector<Time> last(n, kTimeMin);
  for (const auto& e : mdd.edges) {
    if (!e.alive) continue;
    ++out.edge_visits;
    const auto j = static_cast<std::size_t>(e.label);
    first[j] = std::min(first[j], mdd.nodes[e.from].down.est);
    last[j] = std::max(last[j], std::min(w[e.label].lct, mdd.nodes[e.to].up.lst));
  }
  for (JobId i = 0; i < w.size(); ++i) {
    const auto j = static_cast<std::size_t>(i);
    if (first[j] == kTimeMax) {
      out.feasible = false;
      continue;
    }
    out.windows[i].est = std::max(w[i].est, first[j]);
    out.windows[i].lct = std::min(w[i].lct, last[j]);
  }
  return out;
}

PrecedenceSet extract_precedences(const RelaxedMdd& mdd, std::uint64_t* tests) {
  const int n = mdd.n;
  PrecedenceSet prec(n);
  const JobSet all = JobSet::full(n);
  std::vector<JobSet> succ(static_cast<std::size_t>(n));
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)] = all.without(i);
  for (const auto& node : mdd.nodes) {
    if (!node.alive) continue;
    // j reached before u and i reachable after u refutes i < j
    node.up.S.for_each([&](JobId i) { succ[static_cast<std::size_t>(i)] = succ[static_cast<std::size_t>(i)] - node.down.S; });
    if (tests) *tests += static_cast<std::uint64_t>(node.up.S.size()) * static_cast<std::uint64_t>(n);
  }
  for (JobId i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)].for_each([&](JobId j) { prec.add(i, j); });
  return prec;
}

std::uint64_t count_paths(const RelaxedMdd& mdd) {
  if (mdd.infeasible) return 0;
  std::vector<std::uint64_t> paths(mdd.nodes.size(), 0);
  paths[0] = 1;
  std::uint64_t total = 0;
  for (int k = 0; k < mdd.n; ++k) {
    for (const auto u : mdd.layers[static_cast<std::size_t>(k)]) {
      if (!mdd.nodes[u].alive) continue;
      for (const auto e : mdd.nodes[u].out) {
        if (!mdd.edges[e].alive) continue;
        auto& p = paths[mdd.edges[e].to];
        p = (p > UINT64_MAX - paths[u]) ? UINT64_MAX : p + paths[u];
      }
    }
  }
  for (const auto u : mdd.layers[static_cast<std::size_t>(mdd.n)])
    if (mdd.nodes[u].alive) total += paths[u];
  return total;
}

std::vector<std::vector<JobId>> enumerate_paths(const RelaxedMdd& mdd, std::size_t limit) {
  std::vector<std::vector<JobId>> out;
  if (mdd.infeasible) return out;
  std::vector<JobId> prefix;
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t u) {
    if (out.size() >= limit) return;
    if (mdd.nodes[u].layer == mdd.n) {
      out.push_back(prefix);
      return;
    }
    for (const auto e : mdd.nodes[u].out) {
      if (!mdd.edges[e].alive) continue;
      prefix.push_back(mdd.edges[e].label);
      walk(mdd.edges[e].to);
      prefix.pop_back();
    }
  };
  walk(0);
  return out;
}

std::string to_dot(const RelaxedMdd& mdd) {
  std::ostringstream os;
  os << "digraph relaxed {\n  rankdir=TB;\n";
  for (std::size_t u = 0; u < mdd.nodes.size(); ++u) {
    const auto& node = mdd.nodes[u];
    if (!node.alive) continue;
    os << "  n" << u << " [label=\"" << job_list(node.down.A) << '/' << job_list(node.down.S) << ", "
       << node.down.est << " | " << job_list(node.up.A) << '/' << job_list(node.up.S) << ", " << node.up.lst
       << "\"];\n";
  }
  for (const auto& e : mdd.edges)
    if (e.alive) os << "  n" << e.from << " -> n" << e.to << " [label=\"t" << e.label + 1 << "\"];\n";
  os << "}\n";
  return os.str();
}

MddPropagator::MddPropagator(Instance instance, Mode mode, int width, int refine_budget)
    : instance_(std::move(instance)), mode_(mode), width_(width), budget_(refine_budget) {}

PropStatus MddPropagator::propagate(DomainStore& store) {
  const Windows w = windows_from(instance_, store);
  if (!generation_ || *generation_ != store.generation()) {
    mdd_ = compile_relaxed(w, width_);
    generation_ = store.generation();
    budget_left_ = budget_;
    ++compilations_;
  } else {
    update(mdd_, w);
  }
  if (mdd_.infeasible) return PropStatus::Infeasible;

  const int done = refine(mdd_, w, budget_left_);
  budget_left_ -= done;
  splits_ += static_cast<std::uint64_t>(done);
  if (mdd_.infeasible) return PropStatus::Infeasible;

  Windows next;
  if (mode_ == Mode::RelaxedBC) {
    const RelaxedBounds b = relaxed_bc_filter(mdd_, w);
    if (!b.feasible) return PropStatus::Infeasible;
    next = b.windows;
  } else {
    next = apply_precedences(extract_precedences(mdd_), w);
  }
  for (JobId j = 0; j < instance_.size(); ++j) {
    if (failed(store.tighten_lower(j, next[j].est))) return PropStatus::Infeasible;
    if (failed(store.tighten_upper(j, next[j].lct - next[j].p))) return PropStatus::Infeasible;
  }
  return PropStatus::Feasible;
}

}  // namespace nomdd
