#ifndef PMCDM_RESULTS_IO_HPP
#define PMCDM_RESULTS_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "pmcdm/ranking_stats.hpp"
#include "pmcdm/simulation.hpp"

namespace pmcdm {

/// A simulation plus every statistic the reports are built from. Charts and
/// summaries read these numbers verbatim; nothing downstream recomputes.
struct StatsBundle {
  SimulationResult result;
  MeanValues means;
  RankProbabilityTable overall_ranks;
  RankProbabilityTable requirement_ranks;
  RankProbabilityTable criterion_ranks;
  std::vector<EmpiricalDistribution> overall_distributions;  // per scenario
  std::vector<SeriesSummary> overall_summary;                // per scenario
  int histogram_bins = 30;
};

StatsBundle compute_stats(SimulationResult result, int histogram_bins = 30);

nlohmann::json results_to_json(const StatsBundle& bundle, bool include_runs = true);
StatsBundle results_from_json(const nlohmann::json& doc);

void save_results(const StatsBundle& bundle, const std::string& path,
                  bool include_runs = true);
StatsBundle load_results(const std::string& path);

}  // namespace pmcdm

#endif
