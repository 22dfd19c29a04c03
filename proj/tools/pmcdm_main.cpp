// Command-line front end: validate trees, derive AHP weights, run the
// sampling simulation, and render reports from saved results.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmcdm/ahp.hpp"
#include "pmcdm/csv.hpp"
#include "pmcdm/digest.hpp"
#include "pmcdm/error.hpp"
#include "pmcdm/hierarchy.hpp"
#include "pmcdm/ranking_stats.hpp"
#include "pmcdm/reporting.hpp"
#include "pmcdm/results_io.hpp"
#include "pmcdm/simulation.hpp"
#include "pmcdm/value_function.hpp"
#include "pmcdm/weight_sampler.hpp"

namespace {

using nlohmann::json;
using namespace pmcdm;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PMCDM_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw Error(ErrorKind::Io, std::string("PMCDM_SEED is not an integer: ") + env);
    return value;
  }
  return kDefaultSeed;
}

json manifest_entry(const std::string& path) {
  return json{{"path", path}, {"fnv1a64", digest_hex(digest_file(path))}};
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, std::uint64_t seed,
                    bool with_seed) {
  json doc;
  doc["command"] = command;
  if (with_seed) doc["seed"] = seed;
  doc["inputs"] = json::array();
  for (const auto& p : inputs) doc["inputs"].push_back(manifest_entry(p));
  doc["outputs"] = json::array();
  for (const auto& p : outputs) doc["outputs"].push_back(manifest_entry(p));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write file: " + path);
  out << doc.dump(1) << '\n';
}

struct ValidateArgs {
  std::string tree_path;
  std::string profile;
};

int cmd_validate(const ValidateArgs& args) {
  std::ifstream in(args.tree_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open file: " << args.tree_path << "\n";
    return kExitUsage;
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    std::cout << "invalid: " << args.tree_path << ": " << e.what() << "\n";
    return kExitDomain;
  }

  TreeLoadOptions opts;
  if (!args.profile.empty()) opts.profile_override = args.profile;
  DecisionTree tree;
  try {
    tree = parse_tree(doc, opts);
  } catch (const Error& e) {
    std::cout << "invalid: " << e.what() << "\n";
    return kExitDomain;
  }

  const auto report = validate_tree(tree);
  if (report.empty()) {
    std::cout << "OK: " << to_string(tree.paradigm) << " tree, "
              << tree.requirements.size() << " requirements, " << tree.criterion_count()
              << " criteria, " << tree.indicator_count() << " indicators\n";
    return kExitOk;
  }
  for (const auto& line : report) std::cout << "violation: " << line << "\n";
  return kExitDomain;
}

struct AhpArgs {
  std::string ratings_path;
  std::string tree_path;
  std::string group;
  std::string out_path;
  std::string profile;
};

void print_group_weights(std::ostream& os, const std::string& label,
                         const DecisionTree& tree,
                         const std::map<std::string, GroupWeights>& weights) {
  os << "== " << label << " ==\n";
  for (const auto& req : tree.requirements) {
    const GroupWeights& gw = weights.at(req.id);
    os << req.id << " (" << req.name << "), CR=" << gw.consistency_ratio << "\n";
    for (const auto& crit : req.criteria)
      os << "  " << crit.id << " " << crit.name << ": " << gw.weights.at(crit.id) << "\n";
  }
}

int cmd_ahp(const AhpArgs& args) {
  TreeLoadOptions opts;
  opts.allow_unresolved_weights = true;
  if (!args.profile.empty()) opts.profile_override = args.profile;
  const DecisionTree tree = parse_tree_file(args.tree_path, opts);
  const RatingsTable ratings = load_ratings_file(args.ratings_path);

  std::vector<std::string> labels;
  if (!args.group.empty()) {
    labels.push_back(args.group);
  } else {
    labels = ratings.groups();
    labels.push_back("General");
  }

  json out_doc;
  for (const auto& label : labels) {
    const auto weights = group_weights(ratings, tree, label);
    print_group_weights(std::cout, label, tree, weights);
    json node;
    for (const auto& [req_id, gw] : weights) {
      node[req_id] = {{"weights", gw.weights}, {"consistency_ratio", gw.consistency_ratio}};
    }
    out_doc["groups"][label] = std::move(node);
  }
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write file: " + args.out_path);
    out << out_doc.dump(1) << '\n';
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string tree_path;
  std::string values_path;
  std::string ratings_path;
  std::string out_path;
  std::string dump_weights_path;
  std::string req_weights;
  std::string profile;
  std::string mode = "literal";
  int runs = 1000;
  int bins = 30;
  double min_weight = 0.1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool no_runs = false;
  std::string command_line;
};

int cmd_simulate(const SimulateArgs& args) {
  TreeLoadOptions opts;
  opts.allow_unresolved_weights = !args.ratings_path.empty();
  if (!args.profile.empty()) opts.profile_override = args.profile;
  DecisionTree tree = opts.allow_unresolved_weights ? parse_tree_file(args.tree_path, opts)
                                                    : load_tree_file(args.tree_path, opts);

  if (!args.ratings_path.empty()) {
    const RatingsTable ratings = load_ratings_file(args.ratings_path);
    apply_group_weights(tree, group_weights(ratings, tree, tree.stakeholder_profile));
  }

  if (!args.req_weights.empty()) {
    std::vector<double> weights;
    std::istringstream ss(args.req_weights);
    std::string token;
    while (std::getline(ss, token, ','))
      weights.push_back(csv::to_number(token, "--req-weights"));
    if (weights.size() != tree.requirements.size())
      throw Error(ErrorKind::Domain,
                  "--req-weights needs " + std::to_string(tree.requirements.size()) +
                      " values");
    for (std::size_t i = 0; i < weights.size(); ++i)
      tree.requirements[i].weight = weights[i];
  }
  {
    const auto violations = validate_tree(tree);
    if (!violations.empty()) {
      std::string msg = "tree invalid after applying options:";
      for (const auto& v : violations) msg += "\n  - " + v;
      throw Error(ErrorKind::Domain, msg);
    }
  }

  const IndicatorValueTable values = load_value_table_file(args.values_path);

  SamplerConfig config;
  config.n_runs = args.runs;
  config.seed = args.seed_given ? args.seed : default_seed();
  config.min_weight = args.min_weight;
  config.mode = constraint_mode_from_string(args.mode);

  const WeightMatrix matrix = build_weight_matrix(tree, config);
  std::vector<std::string> outputs;
  if (!args.dump_weights_path.empty()) {
    std::ofstream out(args.dump_weights_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write file: " + args.dump_weights_path);
    out << weight_matrix_csv(matrix);
    outputs.push_back(args.dump_weights_path);
  }

  const StatsBundle bundle =
      compute_stats(run_simulation(tree, values, matrix, config), args.bins);
  save_results(bundle, args.out_path, !args.no_runs);
  outputs.insert(outputs.begin(), args.out_path);

  std::vector<std::string> inputs = {args.tree_path, args.values_path};
  if (!args.ratings_path.empty()) inputs.push_back(args.ratings_path);
  write_manifest(args.out_path + ".manifest.json", args.command_line, inputs, outputs,
                 config.seed, true);

  std::cout << "wrote " << args.out_path << " (" << to_string(tree.paradigm) << ", "
            << config.n_runs << " runs, seed " << config.seed << ", "
            << to_string(config.mode) << " mode)\n";
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> results_paths;
  std::string charts_dir;
  std::string summary_path;
  std::string command_line;
};

int cmd_report(const ReportArgs& args) {
  namespace fs = std::filesystem;
  if (args.results_paths.empty() || args.results_paths.size() > 2)
    throw Error(ErrorKind::Domain, "report takes one or two --results files");
  fs::create_directories(args.charts_dir);

  std::vector<StatsBundle> bundles;
  for (const auto& path : args.results_paths) bundles.push_back(load_results(path));

  std::vector<std::string> outputs;
  for (const StatsBundle& bundle : bundles) {
    const std::string prefix =
        (fs::path(args.charts_dir) / to_string(bundle.result.paradigm)).string();
    const std::vector<ChartRequest> requests = {
        {ChartKind::Distribution, StatLevel::Overall, 1, prefix + "_distribution_overall.svg"},
        {ChartKind::StackedBar, StatLevel::Requirement, 1, prefix + "_stacked_requirements.svg"},
        {ChartKind::Radar, StatLevel::Requirement, 1, prefix + "_radar_requirements.svg"},
        {ChartKind::Radar, StatLevel::Criterion, 1, prefix + "_radar_criteria.svg"},
        {ChartKind::Heatmap, StatLevel::Requirement, 1, prefix + "_heatmap_requirements.svg"},
        {ChartKind::Heatmap, StatLevel::Criterion, 1, prefix + "_heatmap_criteria.svg"},
        {ChartKind::RankBar, StatLevel::Overall, 1, prefix + "_rank_first.svg"},
        {ChartKind::RankBar, StatLevel::Overall,
         static_cast<int>(bundle.result.scenario_ids.size()), prefix + "_rank_last.svg"},
    };
    for (const auto& path : emit_charts(bundle, requests)) outputs.push_back(path);

    const std::vector<const RankProbabilityTable*> tables = {
        &bundle.overall_ranks, &bundle.requirement_ranks, &bundle.criterion_ranks};
    const std::string csv_path = prefix + "_rank_probabilities.csv";
    std::ofstream csv_out(csv_path, std::ios::binary);
    if (!csv_out) throw Error(ErrorKind::Io, "cannot write file: " + csv_path);
    csv_out << rank_tables_csv(bundle.result.paradigm, tables);
    outputs.push_back(csv_path);
  }

  if (bundles.size() == 2) {
    const std::string path =
        (fs::path(args.charts_dir) / "comparison_overall_means.svg").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write file: " + path);
    out << render_comparison(bundles[0], bundles[1]);
    outputs.push_back(path);
  }

  const std::string summary_path = args.summary_path.empty()
                                       ? (fs::path(args.charts_dir) / "summary.json").string()
                                       : args.summary_path;
  std::vector<const StatsBundle*> refs;
  for (const auto& bundle : bundles) refs.push_back(&bundle);
  emit_summary(refs, summary_path);
  outputs.push_back(summary_path);

  write_manifest((fs::path(args.charts_dir) / "manifest.json").string(), args.command_line,
                 args.results_paths, outputs, 0, false);
  std::cout << "wrote " << outputs.size() << " report files to " << args.charts_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic multi-criteria decision analysis for design scenarios"};
  app.require_subcommand(1);

  std::string command_line;
  for (int i = 0; i < argc; ++i) {
    if (i) command_line += ' ';
    command_line += argv[i];
  }

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a decision-tree config");
  validate->add_option("--tree", validate_args.tree_path, "Tree config (JSON)")->required();
  validate->add_option("--profile", validate_args.profile, "Stakeholder profile");

  AhpArgs ahp_args;
  auto* ahp = app.add_subcommand("ahp", "Derive criteria weights from importance ratings");
  ahp->add_option("--ratings", ahp_args.ratings_path, "Ratings table (CSV)")->required();
  ahp->add_option("--tree", ahp_args.tree_path, "Tree config (JSON)")->required();
  ahp->add_option("--group", ahp_args.group, "Stakeholder group (default: each + General)");
  ahp->add_option("--out", ahp_args.out_path, "Write weight tables (JSON)");
  ahp->add_option("--profile", ahp_args.profile, "Stakeholder profile for the tree");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the weight-ensemble simulation");
  simulate->add_option("--tree", sim_args.tree_path, "Tree config (JSON)")->required();
  simulate->add_option("--values", sim_args.values_path, "Indicator value table (CSV)")
      ->required();
  simulate->add_option("--out", sim_args.out_path, "Results file (JSON)")->required();
  simulate->add_option("--runs", sim_args.runs, "Number of sampled weight sets");
  auto* seed_opt = simulate->add_option("--seed", sim_args.seed, "RNG seed");
  simulate->add_option("--mode", sim_args.mode, "literal | reject-resample");
  simulate->add_option("--min-weight", sim_args.min_weight, "Lower weight bound");
  simulate->add_option("--req-weights", sim_args.req_weights,
                       "Comma-separated requirement weights");
  simulate->add_option("--profile", sim_args.profile, "Stakeholder profile");
  simulate->add_option("--ratings", sim_args.ratings_path,
                       "Derive criteria weights from this ratings table");
  simulate->add_option("--bins", sim_args.bins, "Histogram bins");
  simulate->add_flag("--no-runs", sim_args.no_runs, "Omit per-run arrays from the results");
  simulate->add_option("--dump-weights", sim_args.dump_weights_path,
                       "Also write the sampled weight matrix (CSV)");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Render charts and a summary from results");
  report->add_option("--results", report_args.results_paths, "Results file(s), one per paradigm")
      ->required();
  report->add_option("--charts", report_args.charts_dir, "Output directory")->required();
  report->add_option("--summary", report_args.summary_path, "Summary path (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  sim_args.seed_given = seed_opt->count() > 0;
  sim_args.command_line = command_line;
  report_args.command_line = command_line;

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_args);
    if (app.got_subcommand(ahp)) return cmd_ahp(ahp_args);
    if (app.got_subcommand(simulate)) return cmd_simulate(sim_args);
    if (app.got_subcommand(report)) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
