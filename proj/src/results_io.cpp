#include "pmcdm/results_io.hpp"

#include <fstream>

#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

using nlohmann::json;

constexpr const char* kSchemaTag = "pmcdm-results-v1";

json vector_to_json(const std::vector<double>& v) { return json(v); }

std::vector<double> vector_from_json(const json& node, const std::string& where) {
  if (!node.is_array())
    throw Error(ErrorKind::Domain, where + ": expected an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& x : node) {
    if (!x.is_number()) throw Error(ErrorKind::Domain, where + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json rank_table_to_json(const RankProbabilityTable& table) {
  json out;
  for (const auto& node : table.nodes) {
    json entry;
    for (std::size_t s = 0; s < table.scenario_ids.size(); ++s)
      entry[table.scenario_ids[s]] = vector_to_json(node.prob[s]);
    out[node.node_id] = std::move(entry);
  }
  return out;
}

RankProbabilityTable rank_table_from_json(const json& node, StatLevel level,
                                          const std::vector<std::string>& node_ids,
                                          const std::vector<std::string>& scenario_ids) {
  RankProbabilityTable table;
  table.level = level;
  table.scenario_ids = scenario_ids;
  for (const auto& id : node_ids) {
    auto it = node.find(id);
    if (it == node.end())
      throw Error(ErrorKind::Domain, "results: missing rank table for " + id);
    NodeRankTable entry;
    entry.node_id = id;
    for (const auto& sid : scenario_ids)
      entry.prob.push_back(vector_from_json(it->at(sid), "rank table " + id));
    table.nodes.push_back(std::move(entry));
  }
  return table;
}

const json& require(const json& node, const char* key) {
  auto it = node.find(key);
  if (it == node.end())
    throw Error(ErrorKind::Domain, std::string("results: missing field '") + key + "'");
  return *it;
}

}  // namespace

StatsBundle compute_stats(SimulationResult result, int histogram_bins) {
  StatsBundle bundle;
  bundle.result = std::move(result);
  bundle.histogram_bins = histogram_bins;
  bundle.means = mean_values(bundle.result);
  bundle.overall_ranks = rank_probabilities(bundle.result, StatLevel::Overall);
  bundle.requirement_ranks = rank_probabilities(bundle.result, StatLevel::Requirement);
  bundle.criterion_ranks = rank_probabilities(bundle.result, StatLevel::Criterion);
  for (std::size_t s = 0; s < bundle.result.scenario_ids.size(); ++s) {
    const std::vector<double> series = bundle.result.series_overall(static_cast<int>(s));
    bundle.overall_distributions.push_back(empirical_distribution(series, histogram_bins));
    bundle.overall_summary.push_back(summarize(series));
  }
  return bundle;
}

json results_to_json(const StatsBundle& bundle, bool include_runs) {
  const SimulationResult& r = bundle.result;
  json doc;
  doc["schema"] = kSchemaTag;
  doc["paradigm"] = to_string(r.paradigm);
  doc["config"] = {
      {"seed", r.seed},
      {"runs", r.n_runs},
      {"mode", to_string(r.mode)},
      {"min_weight", r.min_weight},
      {"stakeholder_profile", r.stakeholder_profile},
      {"histogram_bins", bundle.histogram_bins},
  };
  doc["scenarios"] = r.scenario_ids;
  doc["requirements"] = r.requirement_ids;
  doc["criteria"] = r.criterion_ids;
  json req_weights;
  for (std::size_t i = 0; i < r.requirement_ids.size(); ++i)
    req_weights[r.requirement_ids[i]] = r.requirement_weights[i];
  doc["config"]["requirement_weights"] = std::move(req_weights);

  json stats;
  json means;
  for (std::size_t s = 0; s < r.scenario_ids.size(); ++s) {
    const auto& sid = r.scenario_ids[s];
    means["overall"][sid] = bundle.means.overall[s];
    for (std::size_t i = 0; i < r.requirement_ids.size(); ++i)
      means["requirements"][r.requirement_ids[i]][sid] = bundle.means.requirements[s][i];
    for (std::size_t i = 0; i < r.criterion_ids.size(); ++i)
      means["criteria"][r.criterion_ids[i]][sid] = bundle.means.criteria[s][i];
  }
  stats["means"] = std::move(means);

  json summaries;
  for (std::size_t s = 0; s < r.scenario_ids.size(); ++s) {
    const SeriesSummary& sum = bundle.overall_summary[s];
    summaries[r.scenario_ids[s]] = {
        {"mean", sum.mean},     {"min", sum.min},     {"p2_5", sum.p2_5},
        {"median", sum.median}, {"p97_5", sum.p97_5}, {"max", sum.max},
    };
  }
  stats["summary"] = std::move(summaries);

  stats["rank_probabilities"] = {
      {"overall", rank_table_to_json(bundle.overall_ranks)},
      {"requirements", rank_table_to_json(bundle.requirement_ranks)},
      {"criteria", rank_table_to_json(bundle.criterion_ranks)},
  };

  json dists;
  for (std::size_t s = 0; s < r.scenario_ids.size(); ++s) {
    const EmpiricalDistribution& d = bundle.overall_distributions[s];
    dists[r.scenario_ids[s]] = {
        {"edges", d.edges}, {"counts", d.counts}, {"cdf", d.cdf}};
  }
  stats["distributions"] = std::move(dists);
  doc["statistics"] = std::move(stats);

  if (include_runs) {
    json runs;
    for (std::size_t s = 0; s < r.scenario_ids.size(); ++s) {
      const auto& sid = r.scenario_ids[s];
      runs["overall"][sid] = r.series_overall(static_cast<int>(s));
      for (std::size_t i = 0; i < r.requirement_ids.size(); ++i)
        runs["requirements"][r.requirement_ids[i]][sid] =
            r.series_requirement(static_cast<int>(s), static_cast<int>(i));
      for (std::size_t i = 0; i < r.criterion_ids.size(); ++i)
        runs["criteria"][r.criterion_ids[i]][sid] =
            r.series_criterion(static_cast<int>(s), static_cast<int>(i));
    }
    doc["runs"] = std::move(runs);
  }
  return doc;
}

namespace {
StatsBundle results_from_json_impl(const json& doc);
}  // namespace

StatsBundle results_from_json(const json& doc) {
  try {
    return results_from_json_impl(doc);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Domain, std::string("results: ") + e.what());
  }
}

namespace {
StatsBundle results_from_json_impl(const json& doc) {
  if (!doc.is_object() || doc.value("schema", "") != kSchemaTag)
    throw Error(ErrorKind::Domain, "results: not a pmcdm results document");

  StatsBundle bundle;
  SimulationResult& r = bundle.result;
  r.paradigm = paradigm_from_string(require(doc, "paradigm").get<std::string>());
  const json& config = require(doc, "config");
  r.seed = require(config, "seed").get<std::uint64_t>();
  r.n_runs = require(config, "runs").get<int>();
  r.mode = constraint_mode_from_string(require(config, "mode").get<std::string>());
  r.min_weight = require(config, "min_weight").get<double>();
  r.stakeholder_profile = require(config, "stakeholder_profile").get<std::string>();
  bundle.histogram_bins = config.value("histogram_bins", 30);
  r.scenario_ids = require(doc, "scenarios").get<std::vector<std::string>>();
  r.requirement_ids = require(doc, "requirements").get<std::vector<std::string>>();
  r.criterion_ids = require(doc, "criteria").get<std::vector<std::string>>();
  const json& req_weights = require(config, "requirement_weights");
  for (const auto& id : r.requirement_ids)
    r.requirement_weights.push_back(require(req_weights, id.c_str()).get<double>());

  const json& stats = require(doc, "statistics");
  const json& means = require(stats, "means");
  const std::size_t n_scenarios = r.scenario_ids.size();
  bundle.means.overall.assign(n_scenarios, 0.0);
  bundle.means.requirements.assign(n_scenarios,
                                   std::vector<double>(r.requirement_ids.size(), 0.0));
  bundle.means.criteria.assign(n_scenarios,
                               std::vector<double>(r.criterion_ids.size(), 0.0));
  for (std::size_t s = 0; s < n_scenarios; ++s) {
    const auto& sid = r.scenario_ids[s];
    bundle.means.overall[s] = require(means, "overall").at(sid).get<double>();
    for (std::size_t i = 0; i < r.requirement_ids.size(); ++i)
      bundle.means.requirements[s][i] =
          require(means, "requirements").at(r.requirement_ids[i]).at(sid).get<double>();
    for (std::size_t i = 0; i < r.criterion_ids.size(); ++i)
      bundle.means.criteria[s][i] =
          require(means, "criteria").at(r.criterion_ids[i]).at(sid).get<double>();
  }

  const json& summaries = require(stats, "summary");
  for (const auto& sid : r.scenario_ids) {
    const json& node = require(summaries, sid.c_str());
    SeriesSummary sum;
    sum.mean = require(node, "mean").get<double>();
    sum.min = require(node, "min").get<double>();
    sum.p2_5 = require(node, "p2_5").get<double>();
    sum.median = require(node, "median").get<double>();
    sum.p97_5 = require(node, "p97_5").get<double>();
    sum.max = require(node, "max").get<double>();
    bundle.overall_summary.push_back(sum);
  }

  const json& ranks = require(stats, "rank_probabilities");
  bundle.overall_ranks = rank_table_from_json(require(ranks, "overall"), StatLevel::Overall,
                                              {"overall"}, r.scenario_ids);
  bundle.requirement_ranks =
      rank_table_from_json(require(ranks, "requirements"), StatLevel::Requirement,
                           r.requirement_ids, r.scenario_ids);
  bundle.criterion_ranks =
      rank_table_from_json(require(ranks, "criteria"), StatLevel::Criterion,
                           r.criterion_ids, r.scenario_ids);

  const json& dists = require(stats, "distributions");
  for (const auto& sid : r.scenario_ids) {
    const json& node = require(dists, sid.c_str());
    EmpiricalDistribution d;
    d.edges = vector_from_json(require(node, "edges"), "distribution edges");
    for (const auto& c : require(node, "counts")) d.counts.push_back(c.get<long>());
    d.cdf = vector_from_json(require(node, "cdf"), "distribution cdf");
    bundle.overall_distributions.push_back(std::move(d));
  }

  if (auto it = doc.find("runs"); it != doc.end()) {
    const json& runs = *it;
    std::vector<std::vector<double>> overall;
    for (const auto& sid : r.scenario_ids)
      overall.push_back(vector_from_json(require(runs, "overall").at(sid), "runs"));
    const auto n_runs = static_cast<std::size_t>(r.n_runs);
    for (const auto& series : overall)
      if (series.size() != n_runs)
        throw Error(ErrorKind::Domain, "results: run series length mismatch");

    std::vector<std::vector<std::vector<double>>> req_series, crit_series;
    for (std::size_t s = 0; s < n_scenarios; ++s) {
      req_series.emplace_back();
      crit_series.emplace_back();
      for (const auto& id : r.requirement_ids)
        req_series[s].push_back(
            vector_from_json(require(runs, "requirements").at(id).at(r.scenario_ids[s]),
                             "runs"));
      for (const auto& id : r.criterion_ids)
        crit_series[s].push_back(vector_from_json(
            require(runs, "criteria").at(id).at(r.scenario_ids[s]), "runs"));
    }

    r.runs.reserve(n_runs);
    for (std::size_t run = 0; run < n_runs; ++run) {
      RunResult rr;
      rr.run_index = static_cast<int>(run);
      for (std::size_t s = 0; s < n_scenarios; ++s) {
        ScenarioRun sr;
        sr.overall = overall[s][run];
        for (std::size_t i = 0; i < r.requirement_ids.size(); ++i)
          sr.requirement_values.push_back(req_series[s][i][run]);
        for (std::size_t i = 0; i < r.criterion_ids.size(); ++i)
          sr.criterion_values.push_back(crit_series[s][i][run]);
        rr.scenarios.push_back(std::move(sr));
      }
      r.runs.push_back(std::move(rr));
    }
  }
  return bundle;
}
}  // namespace

void save_results(const StatsBundle& bundle, const std::string& path, bool include_runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write file: " + path);
  out << results_to_json(bundle, include_runs).dump(1) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

StatsBundle load_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Domain, path + ": " + e.what());
  }
  return results_from_json(doc);
}

}  // namespace pmcdm
