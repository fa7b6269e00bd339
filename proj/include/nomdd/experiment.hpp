#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nomdd/instance.hpp"
#include "nomdd/model.hpp"

namespace nomdd {

/// File name of the k-th corpus instance: jit_n{n}_s{seed}_{k}.txt.
std::string corpus_file_name(int n, std::uint64_t seed, int k);

/// Writes `count` generated instances into `dir` (created if missing) and
/// returns their paths.
std::vector<std::string> cmd_gen(int n, int count, std::uint64_t seed, const std::string& dir);

struct NamedInstance {
  std::string name;
  Instance instance;
};

/// Loads and validates instance files; failures are reported on stderr and skipped.
std::vector<NamedInstance> load_corpus(const std::vector<std::string>& paths);
/// The instances cmd_gen would write, named by their file names.
std::vector<NamedInstance> generated_corpus(int n, int count, std::uint64_t seed);

struct ExperimentConfig {
  std::vector<ModelVariant::Kind> variants{ModelVariant::Kind::Baseline, ModelVariant::Kind::RelaxedBC,
                                           ModelVariant::Kind::Precedence, ModelVariant::Kind::ExactBC};
  std::vector<int> widths{8, 16, 32};
  std::uint64_t node_limit = 0;
  std::int64_t time_limit_ms = 0;
  bool deterministic = false;  // time_ms written as 0
  int exact_max_n = 16;        // ExactBC skipped above this size
  int threads = 1;
};

struct ExperimentRow {
  std::string instance;
  std::string variant;
  int width = 0;
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  double time_ms = 0;
  std::optional<Cost> best_cost;
  std::optional<double> gap_vs_bc;
};

inline constexpr const char* kCsvHeader = "instance,variant,width,nodes,failures,time_ms,best_cost,gap_vs_bc";

/// Records one baseline search per instance and replays it under every
/// requested (variant, width). Rows keep corpus order whatever the thread count.
std::vector<ExperimentRow> run_experiment(const std::vector<NamedInstance>& corpus, const ExperimentConfig& config);
/// Same rows for one already-loaded instance.
std::vector<ExperimentRow> experiment_instance(const std::string& name, const Instance& instance,
                                               const ExperimentConfig& config);

std::string format_csv(const std::vector<ExperimentRow>& rows);
/// Throws std::runtime_error when the header or a row is malformed.
std::vector<ExperimentRow> parse_csv(const std::string& text);

struct ProfilePoint {
  std::string method;
  double tau = 1;
  double fraction = 0;
};
struct CactusPoint {
  std::string method;
  double gap = 0;
  double fraction = 0;
};

/// Method key used in reports: variant, plus "/W" for width-carrying variants.
std::string method_key(const ExperimentRow& row);

/// Fraction of instances whose metric is within tau times the best method on
/// that instance. `metric` is "nodes" or "time_ms".
std::vector<ProfilePoint> performance_profile(const std::vector<ExperimentRow>& rows, const std::string& metric = "nodes");
/// Fraction of a method's replays whose gap is at most g.
std::vector<CactusPoint> cactus(const std::vector<ExperimentRow>& rows);

/// Writes profile.csv and cactus.csv into `dir`.
void cmd_report(const std::string& csv_path, const std::string& dir, const std::string& metric = "nodes");

}  // namespace nomdd
