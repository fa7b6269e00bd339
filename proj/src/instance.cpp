#include "nomdd/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nomdd/domain_store.hpp"
#include "nomdd/rng.hpp"

namespace nomdd {

namespace {

Time max_deadline(const std::vector<Job>& jobs) {
  Time h = 0;
  for (const auto& j : jobs) h = std::max(h, j.dbar);
  return h;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < line.size() && !(line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i > b) out.push_back(line.substr(b, i - b));
  }
  return out;
}

Time parse_int(std::string_view tok, int line) {
  Time v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "not an integer: '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Instance::Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)), horizon_(max_deadline(jobs_)) {}

Instance::Instance(std::vector<Job> jobs, Time horizon) : jobs_(std::move(jobs)), horizon_(horizon) {}

Windows Instance::windows() const {
  Windows w;
  w.horizon = horizon_;
  w.jobs.reserve(jobs_.size());
  for (const auto& j : jobs_) w.jobs.push_back({j.r, j.dbar, j.p});
  return w;
}

void validate(const Instance& instance) {
  if (instance.size() < 1) throw InvalidInstance("instance has no jobs");
  if (instance.size() > kMaxJobs)
    throw InvalidInstance("instance has " + std::to_string(instance.size()) + " jobs, limit is " +
                          std::to_string(kMaxJobs));
  for (const auto& j : instance.jobs()) {
    const std::string tag = "job " + std::to_string(j.id) + ": ";
    if (j.p < 1) throw InvalidInstance(tag + "processing time must be positive");
    if (j.r < 0) throw InvalidInstance(tag + "negative release date");
    if (j.r + j.p > j.dbar) throw InvalidInstance(tag + "window too small (r + p > dbar)");
    if (j.d < j.r + j.p || j.d > j.dbar) throw InvalidInstance(tag + "due date outside [r + p, dbar]");
    if (j.dbar > instance.horizon()) throw InvalidInstance(tag + "deadline beyond horizon");
  }
}

Instance load_instance(std::string_view text) {
  int line_no = 0;
  int expected = -1;
  int header_line = 0;
  std::vector<Job> jobs;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().front() == '#') continue;

    if (expected < 0) {
      if (toks.size() != 1) throw ParseError(line_no, "expected job count");
      const Time n = parse_int(toks[0], line_no);
      if (n < 1) throw ParseError(line_no, "job count must be at least 1");
      if (n > kMaxJobs) throw ParseError(line_no, "job count exceeds " + std::to_string(kMaxJobs));
      expected = static_cast<int>(n);
      header_line = line_no;
      continue;
    }
    if (static_cast<int>(jobs.size()) == expected) throw ParseError(line_no, "more job lines than declared");
    if (toks.size() != 3 && toks.size() != 4) throw ParseError(line_no, "expected 'r p dbar [d]'");

    Job j;
    j.id = static_cast<int>(jobs.size()) + 1;
    j.r = parse_int(toks[0], line_no);
    j.p = parse_int(toks[1], line_no);
    j.dbar = parse_int(toks[2], line_no);
    j.d = toks.size() == 4 ? parse_int(toks[3], line_no) : j.dbar;
    if (j.p < 1) throw ParseError(line_no, "processing time must be positive");
    if (j.r < 0) throw ParseError(line_no, "negative release date");
    if (j.r + j.p > j.dbar) throw ParseError(line_no, "window too small (r + p > dbar)");
    if (j.d < j.r + j.p || j.d > j.dbar) throw ParseError(line_no, "due date outside [r + p, dbar]");
    jobs.push_back(j);
  }

  if (expected < 0) throw ParseError(line_no, "empty instance");
  if (static_cast<int>(jobs.size()) != expected)
    throw ParseError(header_line, "declared " + std::to_string(expected) + " jobs, found " +
                                      std::to_string(jobs.size()));
  return Instance(std::move(jobs));
}

std::string save_instance(const Instance& instance) {
  std::ostringstream os;
  os << instance.size() << '\n';
  for (const auto& j : instance.jobs()) {
    os << j.r << ' ' << j.p << ' ' << j.dbar;
    if (j.d != j.dbar) os << ' ' << j.d;
    os << '\n';
  }
  return os.str();
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_instance(ss.str());
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << save_instance(instance);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t instance_digest(const Instance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : save_instance(instance)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Instance mirror_instance(const Instance& instance) {
  const Time h = instance.horizon();
  std::vector<Job> jobs;
  jobs.reserve(instance.jobs().size());
  for (const auto& j : instance.jobs()) {
    // the mirrored due date sits where the job would start if it ended on d
    jobs.push_back({j.id, h - j.dbar, j.p, h - j.d + j.p, h - j.r});
  }
  return Instance(std::move(jobs), h);
}

Instance generate_instance(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInstance("n must be at least 1");
  if (n > kMaxJobs) throw InvalidInstance("n exceeds " + std::to_string(kMaxJobs));
  SplitMix64 rng(seed);
  std::vector<Time> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = rng.uniform(1, 25);
  std::vector<Time> cursor(static_cast<std::size_t>(n));
  for (std::size_t j = 1; j < cursor.size(); ++j) cursor[j] = cursor[j - 1] + p[j - 1];

  std::vector<Job> jobs;
  jobs.reserve(p.size());
  for (int j = 0; j < n; ++j) {
    const auto lo = static_cast<std::size_t>(std::max(0, j - 2));
    const auto hi = static_cast<std::size_t>(std::min(n - 1, j + 2));
    Job job;
    job.id = j + 1;
    job.p = p[static_cast<std::size_t>(j)];
    job.r = cursor[lo];
    job.dbar = cursor[hi] + p[hi];
    jobs.push_back(job);
  }
  for (auto& job : jobs) job.d = rng.uniform(job.r + job.p, job.dbar);
  return Instance(std::move(jobs));
}

std::uint64_t corpus_seed(std::uint64_t seed, int k) {
  return SplitMix64(seed).split(static_cast<std::uint64_t>(k)).next();
}

Windows windows_from(const Instance& instance, const DomainStore& store) {
  Windows w;
  w.horizon = instance.horizon();
  w.jobs.reserve(static_cast<std::size_t>(instance.size()));
  for (int j = 0; j < instance.size(); ++j) {
    const Time p = instance.job(j).p;
    w.jobs.push_back({store.lo(j), store.hi(j) + p, p});
  }
  return w;
}

bool is_feasible(const Instance& instance, const Schedule& schedule) {
  const int n = instance.size();
  if (static_cast<int>(schedule.start.size()) != n) return false;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    order[static_cast<std::size_t>(i)] = i;
    const auto& j = instance.job(i);
    const Time s = schedule.start[static_cast<std::size_t>(i)];
    if (s < j.r || s + j.p > j.dbar) return false;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return schedule.start[static_cast<std::size_t>(a)] < schedule.start[static_cast<std::size_t>(b)];
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const int a = order[k - 1];
    const int b = order[k];
    if (schedule.start[static_cast<std::size_t>(a)] + instance.job(a).p > schedule.start[static_cast<std::size_t>(b)])
      return false;
  }
  return true;
}

Cost evaluate_objective(const Instance& instance, const Schedule& schedule) {
  if (!is_feasible(instance, schedule)) throw InfeasibleSchedule("schedule violates windows or overlaps");
  Cost total = 0;
  for (int i = 0; i < instance.size(); ++i) {
    const auto& j = instance.job(i);
    const Time e = schedule.start[static_cast<std::size_t>(i)] + j.p;
    total += std::max<Time>(0, j.d - e) + std::max<Time>(0, e - j.d);
  }
  return total;
}

}  // namespace nomdd
