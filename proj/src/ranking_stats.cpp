#include "pmcdm/ranking_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "pmcdm/error.hpp"

namespace pmcdm {

std::string to_string(StatLevel level) {
  switch (level) {
    case StatLevel::Overall: return "overall";
    case StatLevel::Requirement: return "requirement";
    case StatLevel::Criterion: return "criterion";
  }
  return "overall";
}

std::vector<int> rank_positions(std::span<const double> values, double tie_epsilon) {
  if (values.empty()) throw Error(ErrorKind::Domain, "rank_positions: no values");

  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[static_cast<std::size_t>(a)] != values[static_cast<std::size_t>(b)])
      return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
    return a < b;
  });

  // Chains of near-equal values resolve to ascending scenario index.
  std::size_t start = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    const bool closes_group =
        i == order.size() ||
        values[static_cast<std::size_t>(order[i - 1])] -
                values[static_cast<std::size_t>(order[i])] >
            tie_epsilon;
    if (closes_group) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                order.begin() + static_cast<std::ptrdiff_t>(i));
      start = i;
    }
  }
  return order;
}

const NodeRankTable& RankProbabilityTable::node(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.node_id == id) return n;
  throw Error(ErrorKind::Domain, "no rank table for node " + std::string(id));
}

RankProbabilityTable rank_probabilities(const SimulationResult& result, StatLevel level) {
  if (result.runs.empty()) throw Error(ErrorKind::Domain, "rank_probabilities: no runs");

  RankProbabilityTable table;
  table.level = level;
  table.scenario_ids = result.scenario_ids;

  std::vector<std::string> node_ids;
  switch (level) {
    case StatLevel::Overall: node_ids = {"overall"}; break;
    case StatLevel::Requirement: node_ids = result.requirement_ids; break;
    case StatLevel::Criterion: node_ids = result.criterion_ids; break;
  }

  const std::size_t n_scenarios = result.scenario_ids.size();
  std::vector<double> values(n_scenarios);
  for (std::size_t n = 0; n < node_ids.size(); ++n) {
    NodeRankTable node;
    node.node_id = node_ids[n];
    node.prob.assign(n_scenarios, std::vector<double>(n_scenarios, 0.0));
    for (const auto& run : result.runs) {
      for (std::size_t s = 0; s < n_scenarios; ++s) {
        switch (level) {
          case StatLevel::Overall: values[s] = run.scenarios[s].overall; break;
          case StatLevel::Requirement:
            values[s] = run.scenarios[s].requirement_values[n];
            break;
          case StatLevel::Criterion:
            values[s] = run.scenarios[s].criterion_values[n];
            break;
        }
      }
      const std::vector<int> order = rank_positions(values);
      for (std::size_t pos = 0; pos < order.size(); ++pos)
        node.prob[static_cast<std::size_t>(order[pos])][pos] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(result.runs.size());
    for (auto& row : node.prob)
      for (double& p : row) p *= inv;
    table.nodes.push_back(std::move(node));
  }
  return table;
}

EmpiricalDistribution empirical_distribution(std::span<const double> values, int n_bins) {
  if (values.empty()) throw Error(ErrorKind::Domain, "empirical_distribution: no values");
  if (n_bins < 1) throw Error(ErrorKind::Domain, "empirical_distribution: n_bins must be >= 1");

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;

  EmpiricalDistribution dist;
  if (lo == hi) {
    dist.edges = {lo, hi};
    dist.counts = {static_cast<long>(values.size())};
    dist.cdf = {0.0, 1.0};
    return dist;
  }

  dist.edges.reserve(static_cast<std::size_t>(n_bins) + 1);
  for (int i = 0; i <= n_bins; ++i)
    dist.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins));
  dist.edges.back() = hi;

  dist.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (double v : values) {
    auto bin = static_cast<long>((v - lo) / (hi - lo) * n_bins);
    bin = std::clamp<long>(bin, 0, n_bins - 1);  // the last bin is right-closed
    ++dist.counts[static_cast<std::size_t>(bin)];
  }

  dist.cdf.assign(static_cast<std::size_t>(n_bins) + 1, 0.0);
  long running = 0;
  for (int i = 0; i < n_bins; ++i) {
    running += dist.counts[static_cast<std::size_t>(i)];
    dist.cdf[static_cast<std::size_t>(i) + 1] =
        static_cast<double>(running) / static_cast<double>(values.size());
  }
  dist.cdf.back() = 1.0;
  return dist;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::Domain, "percentile: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (h - std::floor(h));
}

SeriesSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::Domain, "summarize: no values");
  SeriesSummary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.p2_5 = percentile(values, 0.025);
  s.median = percentile(values, 0.5);
  s.p97_5 = percentile(values, 0.975);
  return s;
}

std::vector<SeriesSummary> summary(const SimulationResult& result) {
  if (result.runs.empty()) throw Error(ErrorKind::Domain, "summary: no runs");
  std::vector<SeriesSummary> out;
  out.reserve(result.scenario_ids.size());
  for (std::size_t s = 0; s < result.scenario_ids.size(); ++s)
    out.push_back(summarize(result.series_overall(static_cast<int>(s))));
  return out;
}

std::string rank_tables_csv(Paradigm paradigm,
                            std::span<const RankProbabilityTable* const> tables) {
  std::ostringstream out;
  out << "paradigm,level,node,scenario,position,probability\n";
  char buf[32];
  for (const RankProbabilityTable* table : tables) {
    for (const auto& node : table->nodes) {
      for (std::size_t s = 0; s < table->scenario_ids.size(); ++s) {
        for (std::size_t p = 0; p < node.prob[s].size(); ++p) {
          std::snprintf(buf, sizeof buf, "%.17g", node.prob[s][p]);
          out << to_string(paradigm) << ',' << to_string(table->level) << ','
              << node.node_id << ',' << table->scenario_ids[s] << ',' << p + 1 << ','
              << buf << '\n';
        }
      }
    }
  }
  return out.str();
}

}  // namespace pmcdm
