#include <doctest.h>

#include <cstdlib>

#include "fixtures.hpp"
#include "nomdd/model.hpp"
#include "nomdd/oracle.hpp"

using namespace nomdd;

TEST_CASE("single generated job has a feasible window starting at 0") {
  for (std::uint64_t seed : {1ULL, 99ULL, 12345ULL}) {
    const Instance inst = generate_instance(1, seed);
    REQUIRE(inst.size() == 1);
    const Job& j = inst.job(0);
    CHECK(j.r == 0);
    CHECK(j.dbar == j.p);
    CHECK(j.p >= 1);
    CHECK(j.p <= 25);
    CHECK_NOTHROW(validate(inst));
  }
}

TEST_CASE("generation is deterministic") {
  CHECK(generate_instance(9, 31) == generate_instance(9, 31));
  CHECK_FALSE(generate_instance(9, 31) == generate_instance(9, 32));
}

TEST_CASE("generated instances are almost always feasible") {
  SplitMix64 rng(8);
  int feasible = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = static_cast<int>(rng.uniform(1, 8));
    const Instance inst = generate_instance(n, rng.next());
    OracleOptions opt;
    opt.optimum = false;
    opt.keep_permutations = false;
    if (!oracle_report(inst, std::nullopt, opt).infeasible()) ++feasible;
  }
  CHECK(feasible >= 95);
}

TEST_CASE("generated windows follow the cursor rule and overlap two neighbours each side") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 9;
    const Instance inst = generate_instance(n, seed);
    std::vector<Time> c(n, 0);
    for (int j = 1; j < n; ++j) c[j] = c[j - 1] + inst.job(j - 1).p;
    for (int j = 0; j < n; ++j) {
      const auto& job = inst.job(j);
      const int lo = std::max(0, j - 2);
      const int hi = std::min(n - 1, j + 2);
      CHECK(job.r == c[lo]);
      CHECK(job.dbar == c[hi] + inst.job(hi).p);
      CHECK(job.d >= job.r + job.p);
      CHECK(job.d <= job.dbar);
      for (int k = lo; k <= hi; ++k) {
        const auto& o = inst.job(k);
        CHECK(std::max(job.r, o.r) < std::min(job.dbar, o.dbar));
      }
    }
    CHECK(inst.horizon() == c[n - 1] + inst.job(n - 1).p);
  }
}

TEST_CASE("objective is zero when every job ends on its due date") {
  const Instance inst = load_instance("2\n0 2 10 2\n0 3 10 5\n");
  CHECK(evaluate_objective(inst, {{0, 2}}) == 0);
}

TEST_CASE("single tardy job pays its tardiness") {
  const Instance inst = load_instance("1\n0 3 20 10\n");
  CHECK(evaluate_objective(inst, {{10}}) == 3);
}

TEST_CASE("objective equals the sum of absolute deviations") {
  SplitMix64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Instance inst = fixtures::tiny(4, rng.next(), 30);
    const auto rep = oracle_report(inst, std::nullopt, {false, true});
    if (rep.infeasible()) continue;
    const auto start = *greedy_schedule(inst.windows(), rep.feasible.front());
    Cost expect = 0;
    for (int j = 0; j < inst.size(); ++j) expect += std::abs(start[j] + inst.job(j).p - inst.job(j).d);
    CHECK(evaluate_objective(inst, {start}) == expect);
  }
}

TEST_CASE("evaluating an infeasible schedule throws") {
  const Instance inst = load_instance("2\n0 2 10\n0 2 10\n");
  CHECK_THROWS_AS(evaluate_objective(inst, {{0, 1}}), InfeasibleSchedule);
  CHECK_THROWS_AS(evaluate_objective(inst, {{9, 0}}), InfeasibleSchedule);
  CHECK_THROWS_AS(evaluate_objective(inst, {{0}}), InfeasibleSchedule);
}

TEST_CASE("loading the four-job fixture") {
  const Instance inst = fixtures::four_jobs();
  CHECK(inst.size() == 4);
  CHECK(inst.horizon() == 19);
  CHECK(inst.job(3) == Job{4, 7, 6, 19, 19});
  CHECK(inst.job(0).d == inst.job(0).dbar);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(load_instance(""), ParseError);
  CHECK_THROWS_AS(load_instance("# only a comment\n"), ParseError);
  CHECK_THROWS_AS(load_instance("0\n"), ParseError);
  try {
    load_instance("1\n5 3 7\n");
    FAIL("window too small accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("window too small") != std::string::npos);
  }
  CHECK_THROWS_AS(load_instance("1\n0 0 7\n"), ParseError);
  CHECK_THROWS_AS(load_instance("1\n0 x 7\n"), ParseError);
  CHECK_THROWS_AS(load_instance("2\n0 1 7\n"), ParseError);
  CHECK_THROWS_AS(load_instance("1\n0 1 7\n0 1 7\n"), ParseError);
  CHECK_THROWS_AS(load_instance("1\n0 2 7 1\n"), ParseError);
}

TEST_CASE("save is canonical and round-trips") {
  const std::string messy = "# comment\n 3\n0 2 10   4\n\n1 1 5\n# trailing\n2 3 9 9\n";
  const Instance inst = load_instance(messy);
  const std::string canon = save_instance(inst);
  CHECK(canon == "3\n0 2 10 4\n1 1 5\n2 3 9\n");
  CHECK(save_instance(load_instance(canon)) == canon);
  CHECK(load_instance(canon) == inst);
  for (const auto& g : fixtures::corpus(1, 10, 3)) CHECK(load_instance(save_instance(g)) == g);
}

TEST_CASE("mirror is an involution and digest tracks content") {
  for (const auto& inst : fixtures::corpus(1, 9, 4)) {
    CHECK(mirror_instance(mirror_instance(inst)) == inst);
    CHECK_NOTHROW(validate(mirror_instance(inst)));
  }
  const Instance a = fixtures::four_jobs();
  CHECK(instance_digest(a) == instance_digest(load_instance(save_instance(a))));
  CHECK(instance_digest(a) != instance_digest(mirror_instance(a)));
}

TEST_CASE("baseline model starts from the window domains") {
  Model m = post_model(fixtures::four_jobs(), ModelVariant::baseline());
  const std::vector<std::pair<Time, Time>> expect{{4, 4}, {0, 7}, {0, 7}, {7, 13}};
  for (int j = 0; j < 4; ++j) {
    CHECK(m.store.lo(j) == expect[j].first);
    CHECK(m.store.hi(j) == expect[j].second);
  }
  CHECK(m.objective == 4);
  CHECK(m.engine.size() == 2);
}

TEST_CASE("exact BC model raises t4 to 8 at the first fixpoint") {
  Model m = post_model(fixtures::four_jobs(), ModelVariant::exact_bc());
  CHECK(m.engine.fixpoint(m.store) == PropStatus::Feasible);
  CHECK(m.store.lo(3) == 8);
}

TEST_CASE("single job is fixed iff its window has no slack") {
  for (const auto& v : {ModelVariant::baseline(), ModelVariant::relaxed_bc(2), ModelVariant::precedence(2),
                        ModelVariant::exact_bc()}) {
    Model tight = post_model(load_instance("1\n3 4 7\n"), v);
    CHECK(tight.store.fixed(0));
    Model loose = post_model(load_instance("1\n3 4 9\n"), v);
    CHECK_FALSE(loose.store.fixed(0));
  }
}

TEST_CASE("variant names") {
  for (auto k : {ModelVariant::Kind::Baseline, ModelVariant::Kind::RelaxedBC, ModelVariant::Kind::Precedence,
                 ModelVariant::Kind::ExactBC})
    CHECK(parse_variant(variant_name(k)) == k);
  CHECK_THROWS_AS(parse_variant("nope"), std::invalid_argument);
  CHECK(variant_label(ModelVariant::relaxed_bc(16)) == "relaxed-bc/16");
  CHECK(variant_label(ModelVariant::exact_bc()) == "exact-bc");
  CHECK_THROWS_AS(post_model(fixtures::four_jobs(), ModelVariant::relaxed_bc(0)), std::invalid_argument);
}

TEST_CASE("objective bounds follow interval arithmetic") {
  // one job, s in [0, 8], p = 2, d = 5: e in [2, 10], |e - d| in [0, 5]
  Model m = post_model(load_instance("1\n0 2 10 5\n"), ModelVariant::baseline());
  CHECK(m.engine.fixpoint(m.store) == PropStatus::Feasible);
  CHECK(m.store.lo(m.objective) == 0);
  CHECK(m.store.hi(m.objective) == 5);
  // capping the cost at 1 keeps e in [4, 6]
  m.store.tighten_upper(m.objective, 1);
  CHECK(m.engine.fixpoint(m.store) == PropStatus::Feasible);
  CHECK(m.store.lo(0) == 2);
  CHECK(m.store.hi(0) == 4);
  // fixing the job fixes the cost
  m.store.assign(0, 4);
  CHECK(m.engine.fixpoint(m.store) == PropStatus::Feasible);
  CHECK(m.store.lo(m.objective) == 1);
  CHECK(m.store.hi(m.objective) == 1);
}
