#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "nomdd/instance.hpp"
#include "nomdd/rng.hpp"

namespace fixtures {

using namespace nomdd;

// Four jobs as (r, p, dbar); due dates default to the deadlines.
inline Instance four_jobs() { return load_instance("4\n4 2 6\n0 3 10\n0 2 9\n7 6 19\n"); }

// Generated corpus with `per_n` instances for each size in [lo, hi].
inline std::vector<Instance> corpus(int lo, int hi, int per_n, std::uint64_t seed = 2024) {
  std::vector<Instance> out;
  for (int n = lo; n <= hi; ++n)
    for (int k = 0; k < per_n; ++k)
      out.push_back(generate_instance(n, corpus_seed(seed + static_cast<std::uint64_t>(n), k)));
  return out;
}

// Small random instance with short windows, sized for exhaustive grids.
inline Instance tiny(int n, std::uint64_t seed, Time horizon = 12) {
  SplitMix64 rng(seed);
  std::vector<Job> jobs;
  for (int j = 0; j < n; ++j) {
    Job job;
    job.id = j + 1;
    job.p = rng.uniform(1, 3);
    job.r = rng.uniform(0, horizon - job.p);
    job.dbar = rng.uniform(job.r + job.p, horizon);
    job.d = rng.uniform(job.r + job.p, job.dbar);
    jobs.push_back(job);
  }
  return Instance(std::move(jobs));
}

using PathSet = std::set<std::vector<JobId>>;

inline PathSet as_set(const std::vector<std::vector<JobId>>& v) { return PathSet(v.begin(), v.end()); }

inline bool contains_all(const PathSet& big, const PathSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace fixtures
