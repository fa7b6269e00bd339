#include "nomdd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nomdd/search.hpp"

namespace nomdd {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string corpus_file_name(int n, std::uint64_t seed, int k) {
  return "jit_n" + std::to_string(n) + "_s" + std::to_string(seed) + "_" + std::to_string(k) + ".txt";
}

std::vector<std::string> cmd_gen(int n, int count, std::uint64_t seed, const std::string& dir) {
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (int k = 0; k < count; ++k) {
    const auto path = (std::filesystem::path(dir) / corpus_file_name(n, seed, k)).string();
    save_instance_file(generate_instance(n, corpus_seed(seed, k)), path);
    paths.push_back(path);
  }
  return paths;
}

std::vector<ExperimentRow> experiment_instance(const std::string& name, const Instance& instance,
                                               const ExperimentConfig& config) {
  std::vector<ExperimentRow> rows;
  Model base = post_model(instance, ModelVariant::baseline());
  const SolveResult rec = solve(base, {config.node_limit, config.time_limit_ms});

  auto add = [&](const ModelVariant& v, const SearchStats& s) {
    ExperimentRow r;
    r.instance = name;
    r.variant = std::string(variant_name(v.kind));
    r.width = v.uses_width() ? v.width : 0;
    r.nodes = s.nodes;
    r.failures = s.failures;
    r.time_ms = config.deterministic ? 0.0 : s.time_ms;
    r.best_cost = rec.stats.best;
    rows.push_back(r);
  };

  std::optional<std::uint64_t> exact_nodes;
  for (const auto kind : config.variants) {
    switch (kind) {
      case ModelVariant::Kind::Baseline: add(ModelVariant::baseline(), rec.stats); break;
      case ModelVariant::Kind::RelaxedBC:
      case ModelVariant::Kind::Precedence:
        for (const int w : config.widths) {
          const ModelVariant v{kind, w, -1};
          Model m = post_model(instance, v);
          add(v, replay(rec.log, m));
        }
        break;
      case ModelVariant::Kind::ExactBC: {
        if (instance.size() > config.exact_max_n) break;
        Model m = post_model(instance, ModelVariant::exact_bc());
        const SearchStats s = replay(rec.log, m);
        exact_nodes = s.nodes;
        add(ModelVariant::exact_bc(), s);
        break;
      }
    }
  }
  if (exact_nodes && *exact_nodes > 0)
    for (auto& r : rows) r.gap_vs_bc = gap(r.nodes, *exact_nodes);
  return rows;
}

std::vector<NamedInstance> load_corpus(const std::vector<std::string>& paths) {
  std::vector<NamedInstance> out;
  for (const auto& path : paths) {
    try {
      Instance inst = load_instance_file(path);
      validate(inst);
      out.push_back({std::filesystem::path(path).filename().string(), std::move(inst)});
    } catch (const std::exception& ex) {
      std::cerr << "skipping " << path << ": " << ex.what() << '\n';
    }
  }
  return out;
}

std::vector<NamedInstance> generated_corpus(int n, int count, std::uint64_t seed) {
  std::vector<NamedInstance> out;
  for (int k = 0; k < count; ++k) out.push_back({corpus_file_name(n, seed, k), generate_instance(n, corpus_seed(seed, k))});
  return out;
}

std::vector<ExperimentRow> run_experiment(const std::vector<NamedInstance>& corpus, const ExperimentConfig& config) {
  const std::size_t count = corpus.size();
  std::vector<std::vector<ExperimentRow>> per(count);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        per[i] = experiment_instance(corpus[i].name, corpus[i].instance, config);
      } catch (const std::exception& ex) {
        std::lock_guard lock(err_mu);
        std::cerr << "instance " << corpus[i].name << " failed: " << ex.what() << '\n';
      }
    }
  };
  const int threads = std::max(1, config.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<ExperimentRow> rows;
  for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

std::string format_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.instance << ',' << r.variant << ',' << r.width << ',' << r.nodes << ',' << r.failures << ','
       << std::fixed << std::setprecision(3) << r.time_ms << ',';
    if (r.best_cost) os << *r.best_cost;
    os << ',';
    if (r.gap_vs_bc) os << std::setprecision(6) << *r.gap_vs_bc;
    os << '\n';
  }
  return os.str();
}

std::vector<ExperimentRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("unexpected csv header: " + line);
  std::vector<ExperimentRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 8 fields");
    try {
      ExperimentRow r;
      r.instance = f[0];
      r.variant = f[1];
      r.width = std::stoi(f[2]);
      r.nodes = std::stoull(f[3]);
      r.failures = std::stoull(f[4]);
      r.time_ms = std::stod(f[5]);
      if (!f[6].empty()) r.best_cost = std::stoll(f[6]);
      if (!f[7].empty()) r.gap_vs_bc = std::stod(f[7]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number");
    }
  }
  return rows;
}

std::string method_key(const ExperimentRow& row) {
  return row.width > 0 ? row.variant + "/" + std::to_string(row.width) : row.variant;
}

std::vector<ProfilePoint> performance_profile(const std::vector<ExperimentRow>& rows, const std::string& metric) {
  if (metric != "nodes" && metric != "time_ms") throw std::invalid_argument("unknown metric '" + metric + "'");
  auto value = [&](const ExperimentRow& r) { return metric == "nodes" ? static_cast<double>(r.nodes) : r.time_ms; };

  std::map<std::string, double> best;
  for (const auto& r : rows) {
    auto [it, fresh] = best.try_emplace(r.instance, value(r));
    if (!fresh) it->second = std::min(it->second, value(r));
  }
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& r : rows) {
    const double b = best[r.instance];
    const double v = value(r);
    double ratio = 1;
    if (b > 0) ratio = v / b;
    else if (v > 0) ratio = std::numeric_limits<double>::infinity();
    ratios[method_key(r)].push_back(ratio);
  }
  std::vector<ProfilePoint> out;
  for (auto& [method, rs] : ratios) {
    std::sort(rs.begin(), rs.end());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (std::isinf(rs[i])) break;
      if (i + 1 < rs.size() && rs[i + 1] == rs[i]) continue;
      out.push_back({method, rs[i], static_cast<double>(i + 1) / static_cast<double>(rs.size())});
    }
  }
  return out;
}

std::vector<CactusPoint> cactus(const std::vector<ExperimentRow>& rows) {
  std::map<std::string, std::vector<double>> gaps;
  for (const auto& r : rows)
    if (r.gap_vs_bc) gaps[method_key(r)].push_back(*r.gap_vs_bc);
  std::vector<CactusPoint> out;
  for (auto& [method, gs] : gaps) {
    std::sort(gs.begin(), gs.end());
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (i + 1 < gs.size() && gs[i + 1] == gs[i]) continue;
      out.push_back({method, gs[i], static_cast<double>(i + 1) / static_cast<double>(gs.size())});
    }
  }
  return out;
}

void cmd_report(const std::string& csv_path, const std::string& dir, const std::string& metric) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());

  std::filesystem::create_directories(dir);
  std::ostringstream prof;
  prof << "method,tau,fraction\n" << std::setprecision(6);
  for (const auto& p : performance_profile(rows, metric)) prof << p.method << ',' << p.tau << ',' << p.fraction << '\n';
  write_file((std::filesystem::path(dir) / "profile.csv").string(), prof.str());

  std::ostringstream cac;
  cac << "method,gap,fraction\n" << std::setprecision(6);
  for (const auto& p : cactus(rows)) cac << p.method << ',' << p.gap << ',' << p.fraction << '\n';
  write_file((std::filesystem::path(dir) / "cactus.csv").string(), cac.str());
}

}  // namespace nomdd
