// nomdd command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nomdd/experiment.hpp"
#include "nomdd/instance.hpp"
#include "nomdd/model.hpp"
#include "nomdd/oracle.hpp"
#include "nomdd/search.hpp"

namespace {

using namespace nomdd;

void require_node_limit(bool deterministic, std::uint64_t node_limit) {
  if (deterministic && node_limit == 0) throw CLI::ValidationError("--deterministic", "requires --node-limit");
}

int run_gen(int n, int count, std::uint64_t seed, const std::string& out) {
  for (const auto& p : cmd_gen(n, count, seed, out)) std::cout << p << '\n';
  return 0;
}

int run_solve(const std::string& path, const std::string& variant, int width, std::uint64_t node_limit,
              std::int64_t time_limit, bool deterministic, const std::string& out) {
  const Instance inst = load_instance_file(path);
  validate(inst);
  const ModelVariant v{parse_variant(variant), width, -1};
  Model m = post_model(inst, v);
  const SolveResult r = solve(m, {node_limit, time_limit});
  std::cout << "variant " << variant_label(v) << '\n';
  std::cout << "nodes " << r.stats.nodes << '\n';
  std::cout << "failures " << r.stats.failures << '\n';
  std::cout << "complete " << (r.stats.complete ? 1 : 0) << '\n';
  std::cout << "time_ms " << (deterministic ? 0.0 : r.stats.time_ms) << '\n';
  if (r.best) {
    std::cout << "best_cost " << *r.stats.best << '\n' << "start";
    for (const Time s : r.best->start) std::cout << ' ' << s;
    std::cout << '\n';
  } else {
    std::cout << "best_cost none\n";
  }
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << save_log(r.log);
  }
  return 0;
}

int run_oracle(const std::string& path) {
  const Instance inst = load_instance_file(path);
  validate(inst);
  OracleOptions opt;
  opt.keep_permutations = false;
  std::cout << format_report(oracle_report(inst, std::nullopt, opt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disjunctive scheduling with decision-diagram filtering"};
  app.require_subcommand(1);

  int n = 10;
  int count = 1;
  std::uint64_t seed = 1;
  std::string out;
  auto* gen = app.add_subcommand("gen", "Generate a corpus of random instances");
  gen->add_option("--n", n, "Jobs per instance")->check(CLI::Range(1, kMaxJobs));
  gen->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Corpus seed");
  gen->add_option("--out", out, "Output directory")->required();

  std::string instance;
  std::string variant = "baseline";
  int width = 16;
  std::uint64_t node_limit = 0;
  std::int64_t time_limit = 0;
  bool deterministic = false;
  auto* sol = app.add_subcommand("solve", "Branch and bound on one instance");
  sol->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  sol->add_option("--variant", variant, "baseline | relaxed-bc | pe | exact-bc");
  sol->add_option("--width", width, "MDD width")->check(CLI::PositiveNumber);
  sol->add_option("--node-limit", node_limit, "Stop after this many nodes (0 = none)");
  sol->add_option("--time-limit", time_limit, "Stop after this many milliseconds (0 = none)");
  sol->add_flag("--deterministic", deterministic, "Report time as 0; requires --node-limit");
  sol->add_option("--out", out, "Write the replay log here");

  std::vector<std::string> inputs;
  std::vector<std::string> variants;
  std::vector<int> widths;
  int exact_max_n = 16;
  int threads = 1;
  auto* exp = app.add_subcommand("experiment", "Record baseline searches and replay them per variant");
  exp->add_option("instances", inputs, "Instance files (or use --n/--count/--seed)");
  exp->add_option("--n", n, "Generate instances of this size")->check(CLI::Range(1, kMaxJobs));
  exp->add_option("--count", count, "Generated instance count")->check(CLI::PositiveNumber);
  exp->add_option("--seed", seed, "Corpus seed");
  exp->add_option("--variant", variants, "Variants to replay (repeatable)");
  exp->add_option("--width", widths, "Widths for MDD variants (repeatable)")->check(CLI::PositiveNumber);
  exp->add_option("--node-limit", node_limit, "Baseline recording node limit");
  exp->add_option("--time-limit", time_limit, "Baseline recording time limit in ms");
  exp->add_flag("--deterministic", deterministic, "Write time_ms as 0; requires --node-limit");
  exp->add_option("--exact-max-n", exact_max_n, "Skip exact-bc above this size");
  exp->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_option("--out", out, "CSV output file (default stdout)");

  std::string csv;
  std::string metric = "nodes";
  auto* rep = app.add_subcommand("report", "Performance profile and cactus data from experiment CSV");
  rep->add_option("csv", csv, "Experiment CSV")->required()->check(CLI::ExistingFile);
  rep->add_option("--metric", metric, "nodes | time_ms");
  rep->add_option("--out", out, "Output directory")->required();

  auto* orc = app.add_subcommand("oracle", "Brute-force report for a small instance");
  orc->add_option("instance", instance, "Instance file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(n, count, seed, out);
    if (*sol) {
      require_node_limit(deterministic, node_limit);
      return run_solve(instance, variant, width, node_limit, time_limit, deterministic, out);
    }
    if (*exp) {
      require_node_limit(deterministic, node_limit);
      ExperimentConfig cfg;
      if (!variants.empty()) {
        cfg.variants.clear();
        for (const auto& v : variants) cfg.variants.push_back(parse_variant(v));
      }
      if (!widths.empty()) cfg.widths = widths;
      cfg.node_limit = node_limit;
      cfg.time_limit_ms = time_limit;
      cfg.deterministic = deterministic;
      cfg.exact_max_n = exact_max_n;
      cfg.threads = threads;
      const auto corpus = inputs.empty() ? generated_corpus(n, count, seed) : load_corpus(inputs);
      if (corpus.empty()) throw std::runtime_error("no instances to run");
      const auto rows = run_experiment(corpus, cfg);
      const std::string text = format_csv(rows);
      if (out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << text;
      }
      return 0;
    }
    if (*rep) {
      cmd_report(csv, out, metric);
      return 0;
    }
    if (*orc) return run_oracle(instance);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
