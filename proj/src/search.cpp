#include "nomdd/search.hpp"

#include <chrono>
#include <sstream>

namespace nomdd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string_view kind_name(DecisionKind k) {
  switch (k) {
    case DecisionKind::Root: return "root";
    case DecisionKind::Assign: return "assign";
    case DecisionKind::ExcludeBelow: return "geq";
  }
  return "?";
}

std::string_view status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Branch: return "branch";
    case NodeStatus::Fail: return "fail";
    case NodeStatus::Solution: return "sol";
  }
  return "?";
}

bool apply(DomainStore& store, const Decision& d) {
  switch (d.kind) {
    case DecisionKind::Root: return true;
    case DecisionKind::Assign: return !failed(store.assign(d.var, d.value));
    case DecisionKind::ExcludeBelow: return !failed(store.tighten_lower(d.var, d.value));
  }
  return false;
}

// Runs the node: decision, incumbent cut, fixpoint. The caller owns the checkpoint.
bool enter(Model& m, const Decision& d, const std::optional<Cost>& incumbent) {
  if (m.trivially_infeasible) return false;
  if (!apply(m.store, d)) return false;
  if (incumbent && failed(m.store.tighten_upper(m.objective, *incumbent - 1))) return false;
  return m.engine.fixpoint(m.store) == PropStatus::Feasible;
}

class Searcher {
public:
  Searcher(Model& m, const SearchLimits& limits) : m_(m), limits_(limits), conflicts_(m.jobs()) {
    log_.digest = instance_digest(m.instance);
    log_.node_limit = limits.node_limit;
    log_.time_limit_ms = limits.time_limit_ms;
  }

  SolveResult run() {
    t0_ = Clock::now();
    visit(0, Decision{});
    SolveResult r;
    stats_.complete = !stopped_;
    stats_.time_ms = ms_since(t0_);
    log_.complete = stats_.complete;
    r.best = best_;
    r.stats = std::move(stats_);
    r.log = std::move(log_);
    return r;
  }

private:
  bool out_of_budget() {
    if (limits_.node_limit && stats_.nodes >= limits_.node_limit) return true;
    if (limits_.time_limit_ms && ms_since(t0_) >= static_cast<double>(limits_.time_limit_ms)) return true;
    return false;
  }

  // Returns false when the node itself failed.
  bool visit(int depth, const Decision& d) {
    const std::size_t index = log_.nodes.size();
    log_.nodes.push_back({depth, d, NodeStatus::Branch});
    ++stats_.nodes;

    const auto cp = m_.store.checkpoint();
    const auto t = Clock::now();
    const bool ok = enter(m_, d, stats_.best);
    stats_.node_us.push_back(std::chrono::duration<double, std::micro>(Clock::now() - t).count());
    if (!ok) {
      log_.nodes[index].status = NodeStatus::Fail;
      ++stats_.failures;
      m_.store.restore(cp);
      return false;
    }
    if (m_.all_fixed()) {
      const Cost c = m_.store.lo(m_.objective);
      log_.nodes[index].status = NodeStatus::Solution;
      log_.incumbents.emplace_back(index, c);
      ++stats_.solutions;
      stats_.best = c;
      best_ = m_.schedule();
      m_.store.restore(cp);
      return true;
    }

    const Decision next = cos_next_decision(m_, conflicts_);
    const Decision left{next.var, DecisionKind::Assign, next.value};
    const Decision right{next.var, DecisionKind::ExcludeBelow, next.value + 1};
    for (const auto& child : {left, right}) {
      if (stopped_ || out_of_budget()) {
        stopped_ = true;
        break;
      }
      if (!visit(depth + 1, child)) conflicts_.record(child.var);
    }
    m_.store.restore(cp);
    return true;
  }

  Model& m_;
  SearchLimits limits_;
  ConflictState conflicts_;
  SearchStats stats_;
  ReplayLog log_;
  std::optional<Schedule> best_;
  Clock::time_point t0_;
  bool stopped_ = false;
};

class Replayer {
public:
  Replayer(const ReplayLog& log, Model& m) : log_(log), m_(m) {}

  SearchStats run() {
    const auto t0 = Clock::now();
    while (pos_ < log_.nodes.size()) node();
    stats_.complete = log_.complete;
    stats_.time_ms = ms_since(t0);
    return std::move(stats_);
  }

private:
  std::optional<Cost> cut_before(std::size_t index) const {
    std::optional<Cost> c;
    for (const auto& [at, cost] : log_.incumbents)
      if (at < index && (!c || cost < *c)) c = cost;
    return c;
  }

  void skip_below(int depth) {
    while (pos_ < log_.nodes.size() && log_.nodes[pos_].depth > depth) ++pos_;
  }

  void node() {
    const std::size_t index = pos_++;
    const LogEntry& e = log_.nodes[index];
    ++stats_.nodes;
    const auto cp = m_.store.checkpoint();
    const auto t = Clock::now();
    const bool ok = enter(m_, e.decision, cut_before(index));
    stats_.node_us.push_back(std::chrono::duration<double, std::micro>(Clock::now() - t).count());
    if (!ok) {
      ++stats_.failures;
      skip_below(e.depth);
    } else {
      if (m_.all_fixed()) {
        const Cost c = m_.store.lo(m_.objective);
        ++stats_.solutions;
        if (!stats_.best || c < *stats_.best) stats_.best = c;
      }
      while (pos_ < log_.nodes.size() && log_.nodes[pos_].depth == e.depth + 1) node();
      skip_below(e.depth);
    }
    m_.store.restore(cp);
  }

  const ReplayLog& log_;
  Model& m_;
  SearchStats stats_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string save_log(const ReplayLog& log) {
  std::ostringstream os;
  os << "# nomdd replay log\n";
  os << "version " << ReplayLog::kVersion << '\n';
  os << "digest " << std::hex << log.digest << std::dec << '\n';
  os << "heuristic " << log.heuristic << '\n';
  os << "node_limit " << log.node_limit << '\n';
  os << "time_limit_ms " << log.time_limit_ms << '\n';
  os << "complete " << (log.complete ? 1 : 0) << '\n';
  os << "incumbents " << log.incumbents.size();
  for (const auto& [at, cost] : log.incumbents) os << ' ' << at << ':' << cost;
  os << '\n';
  os << "nodes " << log.nodes.size() << '\n';
  for (const auto& n : log.nodes) {
    os << n.depth << ' ';
    if (n.decision.kind == DecisionKind::Root) os << "- root -";
    else os << n.decision.var << ' ' << kind_name(n.decision.kind) << ' ' << n.decision.value;
    os << ' ' << status_name(n.status) << '\n';
  }
  return os.str();
}

ReplayLog load_log(std::string_view text) try {
  std::istringstream in{std::string(text)};
  ReplayLog log;
  std::string line;
  auto expect = [&](std::string_view key) {
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') break;
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) throw LogError("expected '" + std::string(key) + "', got '" + line + "'");
    std::string rest;
    std::getline(ls, rest);
    return std::istringstream(rest);
  };

  int version = 0;
  expect("version") >> version;
  if (version != ReplayLog::kVersion) throw LogError("unsupported log version " + std::to_string(version));
  expect("digest") >> std::hex >> log.digest;
  expect("heuristic") >> log.heuristic;
  expect("node_limit") >> log.node_limit;
  expect("time_limit_ms") >> log.time_limit_ms;
  int complete = 0;
  expect("complete") >> complete;
  log.complete = complete != 0;
  {
    auto ls = expect("incumbents");
    std::size_t k = 0;
    ls >> k;
    for (std::size_t i = 0; i < k; ++i) {
      std::string tok;
      if (!(ls >> tok)) throw LogError("truncated incumbent list");
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw LogError("bad incumbent '" + tok + "'");
      log.incumbents.emplace_back(std::stoull(tok.substr(0, colon)), std::stoll(tok.substr(colon + 1)));
    }
  }
  std::size_t count = 0;
  expect("nodes") >> count;
  log.nodes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw LogError("truncated node list");
    std::istringstream ls(line);
    LogEntry e;
    std::string var, kind, value, status;
    if (!(ls >> e.depth >> var >> kind >> value >> status)) throw LogError("bad node line '" + line + "'");
    if (kind == "root") {
      e.decision = Decision{};
    } else {
      e.decision.var = std::stoi(var);
      e.decision.value = std::stoll(value);
      if (kind == "assign") e.decision.kind = DecisionKind::Assign;
      else if (kind == "geq") e.decision.kind = DecisionKind::ExcludeBelow;
      else throw LogError("bad decision kind '" + kind + "'");
    }
    if (status == "branch") e.status = NodeStatus::Branch;
    else if (status == "fail") e.status = NodeStatus::Fail;
    else if (status == "sol") e.status = NodeStatus::Solution;
    else throw LogError("bad node status '" + status + "'");
    log.nodes.push_back(e);
  }
  return log;
} catch (const std::logic_error& e) {
  // stoi/stoll on a malformed number
  throw LogError(std::string("bad number in log: ") + e.what());
}

Decision cos_next_decision(const Model& model, const ConflictState& conflicts) {
  VarId pick = -1;
  for (VarId v = 0; v < model.jobs(); ++v) {
    if (model.store.fixed(v)) continue;
    if (pick < 0) {
      pick = v;
      continue;
    }
    const auto sv = conflicts.stamp[static_cast<std::size_t>(v)];
    const auto sp = conflicts.stamp[static_cast<std::size_t>(pick)];
    if (sv != sp) {
      if (sv > sp) pick = v;
    } else if (model.store.lo(v) < model.store.lo(pick)) {
      pick = v;
    }
  }
  if (pick < 0) return Decision{};
  return {pick, DecisionKind::Assign, model.store.lo(pick)};
}

SolveResult solve(Model& model, const SearchLimits& limits) { return Searcher(model, limits).run(); }

SearchStats replay(const ReplayLog& log, Model& model) {
  if (log.digest != instance_digest(model.instance)) throw DigestMismatch("replay log belongs to another instance");
  return Replayer(log, model).run();
}

double gap(std::uint64_t z, std::uint64_t z_prime) {
  if (z_prime == 0) throw std::domain_error("gap undefined for Z' = 0");
  return (static_cast<double>(z) - static_cast<double>(z_prime)) / static_cast<double>(z_prime);
}

}  // namespace nomdd
