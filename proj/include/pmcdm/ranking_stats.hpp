#ifndef PMCDM_RANKING_STATS_HPP
#define PMCDM_RANKING_STATS_HPP

#include <span>
#include <string>
#include <vector>

#include "pmcdm/simulation.hpp"

namespace pmcdm {

enum class StatLevel { Overall, Requirement, Criterion };

std::string to_string(StatLevel level);

/// Scenario indices in descending value order. Values within tie_epsilon of
/// each other count as tied and are ordered by ascending scenario index, so
/// every run resolves to a total order.
std::vector<int> rank_positions(std::span<const double> values,
                                double tie_epsilon = 1e-9);

/// prob[scenario][position]; rows and columns each sum to 1.
struct NodeRankTable {
  std::string node_id;
  std::vector<std::vector<double>> prob;
};

struct RankProbabilityTable {
  StatLevel level = StatLevel::Overall;
  std::vector<std::string> scenario_ids;
  std::vector<NodeRankTable> nodes;

  const NodeRankTable& node(std::string_view id) const;
};

RankProbabilityTable rank_probabilities(const SimulationResult& result, StatLevel level);

struct EmpiricalDistribution {
  std::vector<double> edges;  // n_bins + 1 edges spanning [min, max]
  std::vector<long> counts;   // per bin; last bin right-closed
  std::vector<double> cdf;    // per edge; cdf.front() == 0, cdf.back() == 1
};

/// Equal-width histogram plus CDF. All-identical input degenerates to a
/// single bin whose CDF steps 0 -> 1.
EmpiricalDistribution empirical_distribution(std::span<const double> values,
                                             int n_bins = 30);

struct SeriesSummary {
  double mean = 0.0;
  double min = 0.0;
  double p2_5 = 0.0;
  double median = 0.0;
  double p97_5 = 0.0;
  double max = 0.0;
};

/// Percentiles by linear interpolation between closest ranks.
double percentile(std::span<const double> values, double p);
SeriesSummary summarize(std::span<const double> values);

/// Overall-level summary per scenario.
std::vector<SeriesSummary> summary(const SimulationResult& result);

/// Long-format CSV of rank probabilities:
/// paradigm,level,node,scenario,position,probability.
std::string rank_tables_csv(Paradigm paradigm,
                            std::span<const RankProbabilityTable* const> tables);

}  // namespace pmcdm

#endif
