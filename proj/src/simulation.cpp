#include "pmcdm/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

int index_of(const std::vector<std::string>& ids, std::string_view id) {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  return -1;
}

}  // namespace

int SimulationResult::scenario_index(std::string_view id) const {
  return index_of(scenario_ids, id);
}
int SimulationResult::requirement_index(std::string_view id) const {
  return index_of(requirement_ids, id);
}
int SimulationResult::criterion_index(std::string_view id) const {
  return index_of(criterion_ids, id);
}

std::vector<double> SimulationResult::series_overall(int scenario) const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& run : runs)
    out.push_back(run.scenarios[static_cast<std::size_t>(scenario)].overall);
  return out;
}

std::vector<double> SimulationResult::series_requirement(int scenario, int requirement) const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& run : runs)
    out.push_back(run.scenarios[static_cast<std::size_t>(scenario)]
                      .requirement_values[static_cast<std::size_t>(requirement)]);
  return out;
}

std::vector<double> SimulationResult::series_criterion(int scenario, int criterion) const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& run : runs)
    out.push_back(run.scenarios[static_cast<std::size_t>(scenario)]
                      .criterion_values[static_cast<std::size_t>(criterion)]);
  return out;
}

double criterion_value(std::span<const double> indicator_values,
                       std::span<const double> weights_row) {
  if (indicator_values.size() != weights_row.size())
    throw Error(ErrorKind::Domain, "criterion_value: length mismatch");
  if (indicator_values.empty())
    throw Error(ErrorKind::Domain, "criterion_value: empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < indicator_values.size(); ++i)
    acc += indicator_values[i] * weights_row[i];
  return acc;
}

SimulationResult run_simulation(const DecisionTree& tree,
                                const IndicatorValueTable& values,
                                const WeightMatrix& weights,
                                const SamplerConfig& config) {
  if (weights.indicator_ids != tree.indicator_ids())
    throw Error(ErrorKind::Domain,
                "weight matrix column layout does not match the tree's indicator order");
  if (weights.n_runs != config.n_runs)
    throw Error(ErrorKind::Domain, "weight matrix size does not match configured n_runs");

  SimulationResult result;
  result.paradigm = tree.paradigm;
  result.stakeholder_profile = tree.stakeholder_profile;
  result.seed = config.seed;
  result.n_runs = config.n_runs;
  result.mode = config.mode;
  result.min_weight = config.min_weight;
  result.scenario_ids = values.scenario_ids;
  for (const auto& req : tree.requirements) {
    result.requirement_ids.push_back(req.id);
    result.requirement_weights.push_back(req.weight);
    for (const auto& crit : req.criteria) result.criterion_ids.push_back(crit.id);
  }

  const std::size_t n_scenarios = result.scenario_ids.size();
  const std::size_t n_criteria = result.criterion_ids.size();

  // Indicator values are fixed across runs; evaluate each (indicator,
  // scenario) pair once up front.
  struct CriterionSlice {
    int offset = 0;
    int width = 0;
    std::vector<std::vector<double>> values;  // [scenario][indicator]
  };
  std::vector<CriterionSlice> slices;
  slices.reserve(n_criteria);
  int offset = 0;
  for (const auto& req : tree.requirements) {
    for (const auto& crit : req.criteria) {
      CriterionSlice slice;
      slice.offset = offset;
      slice.width = static_cast<int>(crit.indicators.size());
      slice.values.assign(n_scenarios, {});
      for (std::size_t s = 0; s < n_scenarios; ++s) {
        slice.values[s].reserve(crit.indicators.size());
        for (const auto& ind : crit.indicators) {
          const IndicatorValueEntry& entry = values.at(ind.id);
          if (entry.scores.size() != n_scenarios)
            throw Error(ErrorKind::Domain,
                        "indicator " + ind.id + " is missing scenario scores");
          slice.values[s].push_back(evaluate(entry.spec, entry.scores[s]));
        }
      }
      offset += slice.width;
      slices.push_back(std::move(slice));
    }
  }

  result.runs.reserve(static_cast<std::size_t>(config.n_runs));
  for (int run = 0; run < config.n_runs; ++run) {
    const std::span<const double> weight_row = weights.row(run);
    RunResult rr;
    rr.run_index = run;
    rr.scenarios.assign(n_scenarios, {});
    for (std::size_t s = 0; s < n_scenarios; ++s) {
      ScenarioRun& sr = rr.scenarios[s];
      sr.criterion_values.reserve(n_criteria);
      sr.requirement_values.reserve(result.requirement_ids.size());

      std::size_t crit_index = 0;
      double overall = 0.0;
      for (const auto& req : tree.requirements) {
        double req_value = 0.0;
        for (const auto& crit : req.criteria) {
          const CriterionSlice& slice = slices[crit_index];
          const double cv = criterion_value(
              slice.values[s],
              weight_row.subspan(static_cast<std::size_t>(slice.offset),
                                 static_cast<std::size_t>(slice.width)));
          sr.criterion_values.push_back(cv);
          req_value += crit.ahp_weight * cv;
          ++crit_index;
        }
        sr.requirement_values.push_back(req_value);
        overall += req.weight * req_value;
      }
      sr.overall = overall;
    }
    result.runs.push_back(std::move(rr));
  }
  return result;
}

MeanValues mean_values(const SimulationResult& result) {
  if (result.runs.empty())
    throw Error(ErrorKind::Domain, "mean_values: no runs");

  const std::size_t n_scenarios = result.scenario_ids.size();
  MeanValues means;
  means.overall.assign(n_scenarios, 0.0);
  means.requirements.assign(n_scenarios,
                            std::vector<double>(result.requirement_ids.size(), 0.0));
  means.criteria.assign(n_scenarios,
                        std::vector<double>(result.criterion_ids.size(), 0.0));

  for (const auto& run : result.runs) {
    for (std::size_t s = 0; s < n_scenarios; ++s) {
      means.overall[s] += run.scenarios[s].overall;
      for (std::size_t r = 0; r < result.requirement_ids.size(); ++r)
        means.requirements[s][r] += run.scenarios[s].requirement_values[r];
      for (std::size_t c = 0; c < result.criterion_ids.size(); ++c)
        means.criteria[s][c] += run.scenarios[s].criterion_values[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(result.runs.size());
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    means.overall[s] *= inv;
    for (double& v : means.requirements[s]) v *= inv;
    for (double& v : means.criteria[s]) v *= inv;
  }
  return means;
}

}  // namespace pmcdm
