#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "nomdd/experiment.hpp"

using namespace nomdd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("nomdd_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string(NOMDD_CLI_PATH) + " " + args;
  cmd += stdout_path.empty() ? " > /dev/null 2>&1" : " > " + stdout_path + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ExperimentRow row(const std::string& inst, const std::string& variant, int width, std::uint64_t nodes,
                  std::optional<double> g = std::nullopt) {
  ExperimentRow r;
  r.instance = inst;
  r.variant = variant;
  r.width = width;
  r.nodes = nodes;
  r.gap_vs_bc = g;
  return r;
}

}  // namespace

TEST_CASE("corpus file names") {
  CHECK(corpus_file_name(18, 7, 0) == "jit_n18_s7_0.txt");
  CHECK(corpus_file_name(1, 1, 19) == "jit_n1_s1_19.txt");
}

TEST_CASE("gen writes reload-identical files, byte-identical on a second run") {
  TempDir a("gen_a"), b("gen_b");
  const auto pa = cmd_gen(18, 20, 7, a.path.string());
  const auto pb = cmd_gen(18, 20, 7, b.path.string());
  REQUIRE(pa.size() == 20);
  const auto corpus = generated_corpus(18, 20, 7);
  for (std::size_t k = 0; k < pa.size(); ++k) {
    CHECK(slurp(pa[k]) == slurp(pb[k]));
    const Instance inst = load_instance_file(pa[k]);
    CHECK(inst == corpus[k].instance);
    CHECK(fs::path(pa[k]).filename().string() == corpus[k].name);
  }
  CHECK_THROWS_AS(cmd_gen(3, 0, 1, a.path.string()), std::invalid_argument);
}

TEST_CASE("gen of one job gives a valid instance") {
  TempDir d("gen_one");
  const auto p = cmd_gen(1, 1, 3, d.path.string());
  REQUIRE(p.size() == 1);
  CHECK_NOTHROW(validate(load_instance_file(p[0])));
}

TEST_CASE("baseline-only experiment gives one row and no gap") {
  ExperimentConfig cfg;
  cfg.variants = {ModelVariant::Kind::Baseline};
  const auto rows = experiment_instance("four_jobs", fixtures::four_jobs(), cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].variant == "baseline");
  CHECK(rows[0].width == 0);
  CHECK(rows[0].best_cost == Cost{5});
  CHECK_FALSE(rows[0].gap_vs_bc);
}

TEST_CASE("full experiment has one row per cell and no negative gap") {
  ExperimentConfig cfg;
  cfg.node_limit = 2000;
  cfg.threads = 3;
  const auto corpus = generated_corpus(9, 4, 11);
  const auto rows = run_experiment(corpus, cfg);
  CHECK(rows.size() == corpus.size() * (1 + 3 + 3 + 1));
  for (const auto& r : rows) {
    REQUIRE(r.gap_vs_bc);
    CHECK(*r.gap_vs_bc >= 0);
  }
  // rows keep corpus order
  CHECK(rows.front().instance == corpus.front().name);
  CHECK(rows.back().instance == corpus.back().name);
}

TEST_CASE("exact variant is skipped above the size threshold") {
  ExperimentConfig cfg;
  cfg.variants = {ModelVariant::Kind::Baseline, ModelVariant::Kind::ExactBC};
  cfg.exact_max_n = 5;
  cfg.node_limit = 100;
  const auto rows = experiment_instance("g", generate_instance(6, 1), cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].gap_vs_bc);
}

TEST_CASE("deterministic experiment gives identical CSV across thread counts") {
  ExperimentConfig cfg;
  cfg.node_limit = 500;
  cfg.deterministic = true;
  cfg.widths = {4, 8};
  const auto corpus = generated_corpus(10, 3, 5);
  const std::string a = format_csv(run_experiment(corpus, cfg));
  cfg.threads = 4;
  const std::string b = format_csv(run_experiment(corpus, cfg));
  CHECK(a == b);
  CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("CSV round-trips") {
  std::vector<ExperimentRow> rows{row("a", "baseline", 0, 10, 1.5), row("a", "relaxed-bc", 8, 4, 0.0),
                                  row("b", "pe", 16, 7)};
  rows[0].best_cost = 12;
  rows[1].time_ms = 2.5;
  const auto back = parse_csv(format_csv(rows));
  REQUIRE(back.size() == 3);
  CHECK(back[0].best_cost == Cost{12});
  CHECK(back[1].time_ms == doctest::Approx(2.5));
  CHECK(back[1].gap_vs_bc == 0.0);
  CHECK_FALSE(back[2].gap_vs_bc);
  CHECK_FALSE(back[2].best_cost);
  CHECK(format_csv(back) == format_csv(rows));
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(parse_csv(""), std::runtime_error);
  CHECK_THROWS_AS(parse_csv("instance,variant\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\na,baseline,0,1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\na,baseline,x,1,0,0,,\n"), std::runtime_error);
}

TEST_CASE("profile of a single method is 1 at tau 1") {
  const auto p = performance_profile({row("a", "baseline", 0, 10), row("b", "baseline", 0, 3)});
  REQUIRE(p.size() == 1);
  CHECK(p[0].tau == 1.0);
  CHECK(p[0].fraction == 1.0);
}

TEST_CASE("dominant method reaches 1 at tau 1") {
  const auto p = performance_profile({row("a", "baseline", 0, 10), row("a", "exact-bc", 0, 4),
                                      row("b", "baseline", 0, 8), row("b", "exact-bc", 0, 8)});
  bool found = false;
  for (const auto& q : p)
    if (q.method == "exact-bc") {
      CHECK(q.tau == 1.0);
      CHECK(q.fraction == 1.0);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("profile points on a hand-computed example") {
  // a: best 5, so baseline has ratio 2; b has only baseline, ratio 1
  const auto p = performance_profile({row("a", "baseline", 0, 10), row("a", "relaxed-bc", 8, 5),
                                      row("b", "baseline", 0, 6)});
  REQUIRE(p.size() == 3);
  CHECK(p[0].method == "baseline");
  CHECK(p[0].tau == 1.0);
  CHECK(p[0].fraction == 0.5);
  CHECK(p[1].method == "baseline");
  CHECK(p[1].tau == 2.0);
  CHECK(p[1].fraction == 1.0);
  CHECK(p[2].method == "relaxed-bc/8");
  CHECK(p[2].tau == 1.0);
  CHECK(p[2].fraction == 1.0);
  CHECK_THROWS_AS(performance_profile({}, "bogus"), std::invalid_argument);
}

TEST_CASE("cactus points") {
  const auto c = cactus({row("a", "pe", 8, 0, 0.5), row("b", "pe", 8, 0, 0.0), row("c", "pe", 8, 0, 0.5),
                         row("d", "pe", 8, 0, 2.0), row("a", "baseline", 0, 0)});
  REQUIRE(c.size() == 3);
  CHECK(c[0].gap == 0.0);
  CHECK(c[0].fraction == 0.25);
  CHECK(c[1].gap == 0.5);
  CHECK(c[1].fraction == 0.75);
  CHECK(c[2].gap == 2.0);
  CHECK(c[2].fraction == 1.0);
}

TEST_CASE("command line end to end") {
  TempDir d("cli");
  const std::string corpus = d / "corpus";
  REQUIRE(run_cli("gen --n 6 --count 3 --seed 4 --out " + corpus) == 0);
  const std::string first = (fs::path(corpus) / corpus_file_name(6, 4, 0)).string();
  CHECK(fs::exists(first));

  CHECK(run_cli("oracle " + first, d / "oracle.txt") == 0);
  CHECK(slurp(d / "oracle.txt").find("optimum ") != std::string::npos);

  CHECK(run_cli("solve " + first + " --variant relaxed-bc --width 4 --out " + (d / "log.txt"), d / "solve.txt") == 0);
  CHECK(slurp(d / "solve.txt").find("best_cost ") != std::string::npos);
  CHECK(slurp(d / "log.txt").rfind("# nomdd replay log", 0) == 0);

  const std::string exp = "experiment --n 8 --count 2 --seed 3 --node-limit 300 --deterministic --width 4 --width 8";
  CHECK(run_cli(exp + " --out " + (d / "a.csv")) == 0);
  CHECK(run_cli(exp + " --threads 2 --out " + (d / "b.csv")) == 0);
  CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  CHECK(parse_csv(slurp(d / "a.csv")).size() == 2 * (1 + 2 + 2 + 1));

  CHECK(run_cli("report " + (d / "a.csv") + " --out " + (d / "report")) == 0);
  CHECK(slurp(d / "report/profile.csv").rfind("method,tau,fraction\n", 0) == 0);
  CHECK(slurp(d / "report/cactus.csv").rfind("method,gap,fraction\n", 0) == 0);
}

TEST_CASE("command line errors exit nonzero") {
  TempDir d("cli_err");
  CHECK(run_cli("experiment --n 5 --count 1 --deterministic") != 0);
  CHECK(run_cli("solve /nonexistent/file.txt") != 0);
  CHECK(run_cli("") != 0);
  CHECK(run_cli("gen --n 0 --out " + (d / "x")) != 0);
  std::ofstream(d / "bad.csv") << "not,a,header\n";
  CHECK(run_cli("report " + (d / "bad.csv") + " --out " + (d / "r")) != 0);
  std::ofstream(d / "bad.txt") << "1\n5 3 7\n";
  CHECK(run_cli("oracle " + (d / "bad.txt")) != 0);
  CHECK(run_cli("solve " + (d / "bad.txt") + " --variant nope") != 0);
}
