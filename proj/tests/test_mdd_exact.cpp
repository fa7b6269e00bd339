#include <doctest.h>

#include "fixtures.hpp"
#include "nomdd/mdd_exact.hpp"
#include "nomdd/model.hpp"
#include "nomdd/oracle.hpp"

using namespace nomdd;

namespace {

JobSet jobs(std::initializer_list<int> ids) {
  JobSet s;
  for (int id : ids) s = s.with(id - 1);
  return s;
}

OracleReport report_of(const Instance& inst) {
  OracleOptions opt;
  opt.optimum = false;
  return oracle_report(inst, std::nullopt, opt);
}

}  // namespace

TEST_CASE("lambda at the root admits every job") {
  const Windows w = fixtures::four_jobs().windows();
  CHECK(lambda({JobSet{}, 0}, w) == jobs({1, 2, 3, 4}));
}

TEST_CASE("lambda drops t1 once est passes its deadline") {
  const Windows w = fixtures::four_jobs().windows();
  CHECK_FALSE(lambda({jobs({2, 3}), 7}, w).contains(0));
  CHECK(lambda({jobs({2, 3}), 7}, w).contains(3));
}

TEST_CASE("lambda at the sink is empty") {
  const Windows w = fixtures::four_jobs().windows();
  CHECK(lambda({jobs({1, 2, 3, 4}), 19}, w).empty());
}

TEST_CASE("tau follows the greedy earliest rule") {
  const Windows w = fixtures::four_jobs().windows();
  CHECK(tau({JobSet{}, 0}, 1, w) == ExactState{jobs({2}), 3});
  CHECK(tau({JobSet{}, 0}, 0, w) == ExactState{jobs({1}), 6});
  CHECK(tau({jobs({1, 2, 3}), 8}, 3, w) == ExactState{jobs({1, 2, 3, 4}), 19});
}

TEST_CASE("fixture diagram has two t4 edges from est 8 and 9") {
  const ExactMdd mdd = compile_exact(fixtures::four_jobs().windows());
  std::vector<Time> origins;
  for (const auto& e : mdd.edges())
    if (e.label == 3) origins.push_back(mdd.nodes()[e.from].state.est);
  std::sort(origins.begin(), origins.end());
  CHECK(origins == std::vector<Time>{8, 9});
  CHECK(count_paths(mdd) == 2);
  CHECK(mdd.layer(4).size() == 1);
  CHECK(mdd.nodes()[mdd.layer(4)[0]].state == ExactState{jobs({1, 2, 3, 4}), 19});
  CHECK(to_dot(mdd).find("{1,2,3}, 8") != std::string::npos);
}

TEST_CASE("one job gives one edge") {
  const ExactMdd mdd = compile_exact(load_instance("1\n2 3 9\n").windows());
  CHECK(mdd.edges().size() == 1);
  CHECK(mdd.nodes().size() == 2);
  CHECK(count_paths(mdd) == 1);
}

TEST_CASE("infeasible windows compile to an empty diagram") {
  const ExactMdd mdd = compile_exact(load_instance("2\n0 2 3\n0 2 3\n").windows());
  CHECK(mdd.empty());
  CHECK(count_paths(mdd) == 0);
  CHECK_FALSE(bc_filter(mdd, load_instance("2\n0 2 3\n0 2 3\n").windows()).feasible);
  CHECK_FALSE(exact_bc(load_instance("2\n0 2 3\n0 2 3\n").windows()).feasible);
}

TEST_CASE("paths are exactly the feasible orders") {
  for (const auto& inst : fixtures::corpus(1, 8, 12)) {
    const ExactMdd mdd = compile_exact(inst.windows());
    const auto rep = report_of(inst);
    CHECK(fixtures::as_set(enumerate_paths(mdd)) == fixtures::as_set(rep.feasible));
    CHECK(count_paths(mdd) == rep.feasible_count);
  }
}

TEST_CASE("every kept node lies on a root to sink path") {
  for (const auto& inst : fixtures::corpus(3, 8, 8)) {
    const ExactMdd mdd = compile_exact(inst.windows());
    if (mdd.empty()) continue;
    const auto& nodes = mdd.nodes();
    std::vector<char> down(nodes.size(), 0), up(nodes.size(), 0);
    down[0] = 1;
    for (const auto& e : mdd.edges())
      if (down[e.from]) down[e.to] = 1;
    up[mdd.layer(inst.size()).front()] = 1;
    for (auto it = mdd.edges().rbegin(); it != mdd.edges().rend(); ++it)
      if (up[it->to]) up[it->from] = 1;
    for (std::size_t u = 0; u < nodes.size(); ++u) {
      CHECK(down[u]);
      CHECK(up[u]);
    }
    for (int k = 0; k <= inst.size(); ++k)
      for (const auto u : mdd.layer(k)) CHECK(nodes[u].state.placed.size() == k);
    // compiling again gives the same diagram: the prune is a fixpoint
    CHECK(compile_exact(inst.windows()).edges().size() == mdd.edges().size());
    CHECK(mdd.peak_width() >= mdd.width());
  }
}

TEST_CASE("bc filter raises t4 to 8 and visits each edge once") {
  const Windows w = fixtures::four_jobs().windows();
  const ExactMdd mdd = compile_exact(w);
  const StartFilter f = bc_filter(mdd, w);
  CHECK(f.feasible);
  CHECK(f.est == std::vector<Time>{4, 0, 0, 8});
  CHECK(f.edge_visits == mdd.edges().size());
}

TEST_CASE("bc filter keeps the release date of a lone job") {
  const Windows w = load_instance("1\n5 2 20\n").windows();
  CHECK(bc_filter(compile_exact(w), w).est == std::vector<Time>{5});
}

TEST_CASE("mirrored filtering gives the latest ends") {
  const BcBounds bc = exact_bc(fixtures::four_jobs().windows());
  REQUIRE(bc.feasible);
  std::vector<Time> ends;
  for (const auto& w : bc.windows.jobs) ends.push_back(w.lct);
  CHECK(ends == std::vector<Time>{6, 10, 9, 19});
  const BcBounds single = exact_bc(load_instance("1\n5 2 20\n").windows());
  CHECK(single.windows[0].lct == 20);
}

TEST_CASE("start and end bounds equal the oracle on the corpus") {
  for (const auto& inst : fixtures::corpus(1, 8, 12)) {
    const auto rep = report_of(inst);
    const BcBounds bc = exact_bc(inst.windows());
    CHECK(bc.feasible == !rep.infeasible());
    if (!bc.feasible) continue;
    for (int j = 0; j < inst.size(); ++j) {
      CHECK(bc.windows[j].est == rep.min_start[j]);
      CHECK(bc.windows[j].lct == rep.max_end[j]);
    }
  }
}

TEST_CASE("mirrored instance gives the same end bounds") {
  for (const auto& inst : fixtures::corpus(2, 7, 6)) {
    const Instance m = mirror_instance(inst);
    const ExactMdd md = compile_exact(m.windows());
    const StartFilter f = bc_filter(md, m.windows());
    const BcBounds bc = exact_bc(inst.windows());
    if (!bc.feasible) continue;
    for (int j = 0; j < inst.size(); ++j) CHECK(bc.windows[j].lct == inst.horizon() - f.est[j]);
  }
}

TEST_CASE("exact precedences on the fixture") {
  const PrecedenceSet p = extract_precedences(compile_exact(fixtures::four_jobs().windows()));
  CHECK(p.pairs() == std::vector<std::pair<JobId, JobId>>{{0, 3}, {1, 3}, {2, 3}});
}

TEST_CASE("precedences alone cannot lift t4 past 7") {
  const Windows w = fixtures::four_jobs().windows();
  const PrecedenceSet p = extract_precedences(compile_exact(w));
  Windows cur = w;
  for (int round = 0; round < 5; ++round) cur = apply_precedences(p, cur);
  CHECK(cur[3].est == 7);
}

TEST_CASE("exact precedences equal the oracle's") {
  for (const auto& inst : fixtures::corpus(2, 8, 8)) {
    const auto rep = report_of(inst);
    if (rep.infeasible()) continue;
    CHECK(extract_precedences(compile_exact(inst.windows())) == rep.precedences);
  }
}

TEST_CASE("exact BC propagator tightens from the store") {
  Model m = post_model(fixtures::four_jobs(), ModelVariant::exact_bc());
  auto& prop = m.engine.at(2);
  CHECK(prop.name() == "exact-bc");
  CHECK(prop.propagate(m.store) == PropStatus::Feasible);
  CHECK(m.store.lo(3) == 8);
  CHECK(m.store.hi(0) == 4);
  CHECK(m.store.hi(1) == 7);
  CHECK(m.store.hi(2) == 7);
}
