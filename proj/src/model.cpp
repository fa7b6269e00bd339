#include "nomdd/model.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "nomdd/classic.hpp"
#include "nomdd/mdd_exact.hpp"
#include "nomdd/mdd_relaxed.hpp"

namespace nomdd {

namespace {

Time distance(Time lo, Time hi, Time d) {
  if (d < lo) return lo - d;
  if (d > hi) return d - hi;
  return 0;
}

}  // namespace

std::string_view variant_name(ModelVariant::Kind kind) {
  switch (kind) {
    case ModelVariant::Kind::Baseline: return "baseline";
    case ModelVariant::Kind::RelaxedBC: return "relaxed-bc";
    case ModelVariant::Kind::Precedence: return "pe";
    case ModelVariant::Kind::ExactBC: return "exact-bc";
  }
  return "?";
}

ModelVariant::Kind parse_variant(std::string_view name) {
  for (auto k : {ModelVariant::Kind::Baseline, ModelVariant::Kind::RelaxedBC, ModelVariant::Kind::Precedence,
                 ModelVariant::Kind::ExactBC})
    if (variant_name(k) == name) return k;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::string variant_label(const ModelVariant& v) {
  std::string s(variant_name(v.kind));
  if (v.uses_width()) s += "/" + std::to_string(v.width);
  return s;
}

PropStatus ObjectivePropagator::propagate(DomainStore& store) {
  const int n = instance_.size();
  std::vector<Time> low(static_cast<std::size_t>(n));
  Cost sum_lo = 0;
  Cost sum_hi = 0;
  for (int j = 0; j < n; ++j) {
    const auto& job = instance_.job(j);
    const Time e_lo = store.lo(j) + job.p;
    const Time e_hi = store.hi(j) + job.p;
    low[static_cast<std::size_t>(j)] = distance(e_lo, e_hi, job.d);
    sum_lo += low[static_cast<std::size_t>(j)];
    sum_hi += std::max(std::abs(e_lo - job.d), std::abs(e_hi - job.d));
  }
  if (failed(store.tighten_lower(objective_, sum_lo))) return PropStatus::Infeasible;
  if (failed(store.tighten_upper(objective_, sum_hi))) return PropStatus::Infeasible;

  const Cost cap = store.hi(objective_);
  for (int j = 0; j < n; ++j) {
    const auto& job = instance_.job(j);
    const Cost slack = cap - (sum_lo - low[static_cast<std::size_t>(j)]);
    if (failed(store.tighten_lower(j, job.d - job.p - slack))) return PropStatus::Infeasible;
    if (failed(store.tighten_upper(j, job.d - job.p + slack))) return PropStatus::Infeasible;
  }
  return PropStatus::Feasible;
}

bool Model::all_fixed() const {
  for (int j = 0; j < jobs(); ++j)
    if (!store.fixed(j)) return false;
  return true;
}

Schedule Model::schedule() const {
  Schedule s;
  for (int j = 0; j < jobs(); ++j) s.start.push_back(store.lo(j));
  return s;
}

Model post_model(const Instance& instance, const ModelVariant& variant) {
  if (variant.uses_width() && variant.width < 1) throw std::invalid_argument("width must be at least 1");
  Model m;
  m.instance = instance;
  m.variant = variant;

  Cost worst = 0;
  for (const auto& job : instance.jobs()) {
    const Time hi = job.dbar - job.p;
    if (hi < job.r) m.trivially_infeasible = true;
    m.store.add_var(job.r, std::max(job.r, hi));
    worst += std::max(std::abs(job.r + job.p - job.d), std::abs(job.dbar - job.d));
  }
  m.objective = m.store.add_var(0, worst);

  const int budget = variant.refine_budget < 0 ? 2 * instance.size() : variant.refine_budget;
  m.engine.add(std::make_unique<ObjectivePropagator>(instance, m.objective));
  m.engine.add(std::make_unique<ClassicNoOverlap>(instance));
  switch (variant.kind) {
    case ModelVariant::Kind::Baseline: break;
    case ModelVariant::Kind::RelaxedBC:
      m.engine.add(std::make_unique<MddPropagator>(instance, MddPropagator::Mode::RelaxedBC, variant.width, budget));
      break;
    case ModelVariant::Kind::Precedence:
      m.engine.add(std::make_unique<MddPropagator>(instance, MddPropagator::Mode::Precedence, variant.width, budget));
      break;
    case ModelVariant::Kind::ExactBC: m.engine.add(std::make_unique<ExactBcPropagator>(instance)); break;
  }
  return m;
}

}  // namespace nomdd
