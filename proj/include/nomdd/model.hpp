#pragma once

#include <string>
#include <string_view>

#include "nomdd/domain_store.hpp"
#include "nomdd/instance.hpp"
#include "nomdd/propagator.hpp"

namespace nomdd {

struct ModelVariant {
  enum class Kind { Baseline, RelaxedBC, Precedence, ExactBC };
  Kind kind = Kind::Baseline;
  int width = 0;           // used by RelaxedBC and Precedence, >= 1
  int refine_budget = -1;  // splits per search node; negative means 2n

  static ModelVariant baseline() { return {}; }
  static ModelVariant relaxed_bc(int w, int budget = -1) { return {Kind::RelaxedBC, w, budget}; }
  static ModelVariant precedence(int w, int budget = -1) { return {Kind::Precedence, w, budget}; }
  static ModelVariant exact_bc() { return {Kind::ExactBC, 0, -1}; }

  bool uses_width() const { return kind == Kind::RelaxedBC || kind == Kind::Precedence; }
};

/// "baseline", "relaxed-bc", "pe", "exact-bc".
std::string_view variant_name(ModelVariant::Kind kind);
/// Parses a variant name; throws std::invalid_argument on unknown names.
ModelVariant::Kind parse_variant(std::string_view name);
/// Name plus width for width-carrying variants, e.g. "relaxed-bc/16".
std::string variant_label(const ModelVariant& v);

/// C >= sum_j |s_j + p_j - d_j| by interval arithmetic, both directions.
class ObjectivePropagator final : public Propagator {
public:
  ObjectivePropagator(Instance instance, VarId objective) : instance_(std::move(instance)), objective_(objective) {}
  PropStatus propagate(DomainStore& store) override;
  int priority() const override { return 0; }
  std::string_view name() const override { return "objective"; }

private:
  Instance instance_;
  VarId objective_;
};

/// Start variable of job j is VarId j; the objective is VarId n.
struct Model {
  Instance instance;
  ModelVariant variant;
  DomainStore store;
  Engine engine;
  VarId objective = 0;
  bool trivially_infeasible = false;

  int jobs() const { return instance.size(); }
  bool all_fixed() const;
  Schedule schedule() const;
};

Model post_model(const Instance& instance, const ModelVariant& variant);

}  // namespace nomdd
