#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nomdd/types.hpp"

namespace nomdd {

class DomainStore;

struct Job {
  int id = 1;      // 1..n
  Time r = 0;      // release
  Time p = 1;      // processing time, >= 1
  Time d = 0;      // due date (desired completion)
  Time dbar = 0;   // strict deadline (latest completion)

  bool operator==(const Job&) const = default;
};

/// Raised by load_instance with a 1-based line number in the message.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

class InvalidInstance : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class InfeasibleSchedule : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A single-machine instance. The horizon is max dbar unless given explicitly
/// (mirrored instances keep the horizon of their source).
class Instance {
public:
  Instance() = default;
  explicit Instance(std::vector<Job> jobs);
  Instance(std::vector<Job> jobs, Time horizon);

  int size() const { return static_cast<int>(jobs_.size()); }
  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(JobId j) const { return jobs_[static_cast<std::size_t>(j)]; }
  Time horizon() const { return horizon_; }

  /// Windows at the root: est = r, lct = dbar.
  Windows windows() const;

  bool operator==(const Instance&) const = default;

private:
  std::vector<Job> jobs_;
  Time horizon_ = 0;
};

/// Throws InvalidInstance when a job violates p >= 1, r >= 0, r + p <= dbar
/// or r + p <= d <= dbar, or when n is outside 1..kMaxJobs.
void validate(const Instance& instance);

Instance load_instance(std::string_view text);
/// Canonical text: no comments, single spaces, d omitted when d == dbar.
std::string save_instance(const Instance& instance);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& instance, const std::string& path);

/// FNV-1a 64 of the canonical text.
std::uint64_t instance_digest(const Instance& instance);

/// Job i -> (H - dbar_i, p_i, H - r_i) with d mirrored likewise; keeps H.
Instance mirror_instance(const Instance& instance);

/// Random just-in-time instance. p ~ U[1,25]; with cursor c_1 = 0,
/// c_{j+1} = c_j + p_j the window of job j is
/// [c_{max(1,j-2)}, c_{min(n,j+2)} + p_{min(n,j+2)}] and d ~ U[r + p, dbar].
/// All p are drawn before all d from one SplitMix64 stream seeded with `seed`.
Instance generate_instance(int n, std::uint64_t seed);

/// Seed of the k-th instance of a corpus generated from `seed`.
std::uint64_t corpus_seed(std::uint64_t seed, int k);

struct Schedule {
  std::vector<Time> start;
};

bool is_feasible(const Instance& instance, const Schedule& schedule);

/// Windows under the current bounds of start variables 0..n-1:
/// est = lo(s_j), lct = hi(s_j) + p_j, horizon of the instance.
Windows windows_from(const Instance& instance, const DomainStore& store);

/// Sum of earliness and tardiness. Throws InfeasibleSchedule.
Cost evaluate_objective(const Instance& instance, const Schedule& schedule);

}  // namespace nomdd
