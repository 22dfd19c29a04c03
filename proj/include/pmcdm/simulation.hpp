#ifndef PMCDM_SIMULATION_HPP
#define PMCDM_SIMULATION_HPP

#include <span>
#include <string>
#include <vector>

#include "pmcdm/hierarchy.hpp"
#include "pmcdm/value_function.hpp"
#include "pmcdm/weight_sampler.hpp"

namespace pmcdm {

/// One scenario's aggregates for one run. Vectors follow the id order
/// recorded in SimulationResult.
struct ScenarioRun {
  double overall = 0.0;
  std::vector<double> requirement_values;
  std::vector<double> criterion_values;

  bool operator==(const ScenarioRun&) const = default;
};

struct RunResult {
  int run_index = 0;
  std::vector<ScenarioRun> scenarios;

  bool operator==(const RunResult&) const = default;
};

struct SimulationResult {
  Paradigm paradigm = Paradigm::Sustainability;
  std::string stakeholder_profile;
  std::uint64_t seed = 0;
  int n_runs = 0;
  ConstraintMode mode = ConstraintMode::Literal;
  double min_weight = 0.1;
  std::vector<std::string> scenario_ids;
  std::vector<std::string> requirement_ids;
  std::vector<std::string> criterion_ids;
  std::vector<double> requirement_weights;  // config echo, requirement order
  std::vector<RunResult> runs;

  int scenario_index(std::string_view id) const;    // -1 when absent
  int requirement_index(std::string_view id) const;
  int criterion_index(std::string_view id) const;

  /// One scenario's per-run series at a given level/node.
  std::vector<double> series_overall(int scenario) const;
  std::vector<double> series_requirement(int scenario, int requirement) const;
  std::vector<double> series_criterion(int scenario, int criterion) const;

  bool operator==(const SimulationResult&) const = default;
};

/// Weighted aggregation of one layer: plain dot product. Weights are
/// expected to sum to 1, so the result stays inside [min, max] of values.
double criterion_value(std::span<const double> indicator_values,
                       std::span<const double> weights_row);

/// Pushes the (fixed) indicator values through the sampled fourth-layer
/// weights, the tree's criteria weights, and the requirement weights, for
/// every run and scenario. Indicator values do not vary across runs and are
/// evaluated once. Evaluation order is fixed, so results are bit-stable.
SimulationResult run_simulation(const DecisionTree& tree,
                                const IndicatorValueTable& values,
                                const WeightMatrix& weights,
                                const SamplerConfig& config);

struct MeanValues {
  std::vector<double> overall;                    // [scenario]
  std::vector<std::vector<double>> requirements;  // [scenario][requirement]
  std::vector<std::vector<double>> criteria;      // [scenario][criterion]
};

MeanValues mean_values(const SimulationResult& result);

}  // namespace pmcdm

#endif
