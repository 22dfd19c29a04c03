#include <doctest.h>
#include <json.hpp>

#include "pmcdm/error.hpp"
#include "pmcdm/hierarchy.hpp"
#include "test_helpers.hpp"

using namespace pmcdm;
using nlohmann::json;

namespace {

json minimal_config(int indicators_in_c1 = 1) {
  json inds = json::array();
  for (int i = 0; i < indicators_in_c1; ++i)
    inds.push_back({{"id", "I" + std::to_string(i)}, {"name", "ind"}});
  return json{
      {"paradigm", "sustainability"},
      {"requirements",
       json::array({{{"id", "R1"},
                     {"name", "only"},
                     {"weight", 1.0},
                     {"criteria", json::array({{{"id", "K1"},
                                                {"name", "crit"},
                                                {"ahp_weight", 1.0},
                                                {"indicators", inds}}})}}})},
  };
}

}  // namespace

TEST_CASE("bundled sustainability tree: 4 requirements, 12 criteria, 26 indicators") {
  const DecisionTree tree = testing::sustainability_tree();
  CHECK(tree.paradigm == Paradigm::Sustainability);
  CHECK(tree.stakeholder_profile == "General");
  CHECK(tree.requirements.size() == 4);
  CHECK(tree.criterion_count() == 12);
  CHECK(tree.indicator_count() == 26);
  CHECK(validate_tree(tree).empty());

  // Table-ingested General weights for the Economics group.
  const Criterion* cost = tree.find_criterion("C1");
  REQUIRE(cost != nullptr);
  CHECK(cost->ahp_weight == doctest::Approx(0.34740).epsilon(1e-4));
  CHECK(tree.find_criterion("C2")->ahp_weight == doctest::Approx(0.33660).epsilon(1e-4));
  CHECK(tree.find_criterion("C3")->ahp_weight == doctest::Approx(0.31600).epsilon(1e-4));

  // Equal requirement weights by default.
  for (const auto& req : tree.requirements) CHECK(req.weight == doctest::Approx(0.25));
}

TEST_CASE("bundled circularity tree: 11 criteria, 25 indicators, no waste") {
  const DecisionTree tree = testing::circularity_tree();
  CHECK(tree.paradigm == Paradigm::Circularity);
  CHECK(tree.criterion_count() == 11);
  CHECK(tree.indicator_count() == 25);
  CHECK(validate_tree(tree).empty());
  CHECK(tree.find_criterion("C8") != nullptr);
  CHECK(tree.find_criterion("C8")->name == "CO2");
  CHECK(tree.find_criterion("C11")->name == "Technical capacity");
  CHECK(tree.find_criterion("C12") == nullptr);
}

TEST_CASE("degenerate single-branch tree is valid") {
  const DecisionTree tree = load_tree(minimal_config());
  CHECK(tree.requirements.size() == 1);
  CHECK(tree.indicator_count() == 1);
  CHECK(validate_tree(tree).empty());
}

TEST_CASE("six indicators in one criterion are rejected with the criterion id") {
  CHECK_THROWS_WITH_AS(load_tree(minimal_config(6)),
                       doctest::Contains("K1: m out of range"), Error);
}

TEST_CASE("serialization round-trips structurally") {
  const DecisionTree tree = testing::sustainability_tree();
  const DecisionTree again = load_tree(serialize_tree(tree));
  CHECK(tree == again);

  const DecisionTree circ = testing::circularity_tree();
  CHECK(circ == load_tree(serialize_tree(circ)));
}

TEST_CASE("validation reports nonunit requirement weights and duplicate ids") {
  DecisionTree tree = testing::sustainability_tree();
  for (auto& req : tree.requirements) req.weight = 0.3;
  const auto report = validate_tree(tree);
  REQUIRE(report.size() == 1);
  CHECK(report[0].find("requirement weights sum 1.2") != std::string::npos);

  DecisionTree dup = testing::sustainability_tree();
  // A second indicator named C11 (the first lives under criterion C1).
  dup.requirements[3].criteria[1].indicators[0].id = "C11";
  const auto dup_report = validate_tree(dup);
  REQUIRE(dup_report.size() == 1);
  CHECK(dup_report[0] == "duplicate indicator id C11");

  CHECK(validate_tree(testing::sustainability_tree()).empty());
}

TEST_CASE("criteria group weights must sum to one within 1e-6") {
  json config = minimal_config();
  config["requirements"][0]["criteria"].push_back(
      {{"id", "K2"},
       {"name", "second"},
       {"ahp_weight", 0.2},
       {"indicators", json::array({{{"id", "I9"}, {"name", "ind"}}})}});
  CHECK_THROWS_WITH_AS(load_tree(config), doctest::Contains("sum"), Error);
}

TEST_CASE("requirement weights: all-or-none, else equal split") {
  json config = minimal_config();
  config["requirements"][0].erase("weight");
  const DecisionTree tree = load_tree(config);
  CHECK(tree.requirements[0].weight == doctest::Approx(1.0));

  json partial = testing::sustainability_tree().requirements.empty()
                     ? json{}
                     : serialize_tree(testing::sustainability_tree());
  partial["requirements"][1].erase("weight");
  CHECK_THROWS_WITH_AS(load_tree(partial), doctest::Contains("all requirements or none"),
                       Error);
}

TEST_CASE("profile selection picks the matching weight column") {
  TreeLoadOptions opts;
  opts.profile_override = "Architect";
  const DecisionTree tree = load_tree_file(testing::data_path("sustainability.json"), opts);
  CHECK(tree.stakeholder_profile == "Architect");
  CHECK(tree.find_criterion("C1")->ahp_weight == doctest::Approx(0.35650).epsilon(1e-4));

  TreeLoadOptions unknown;
  unknown.profile_override = "Plumber";
  CHECK_THROWS_WITH_AS(load_tree_file(testing::data_path("sustainability.json"), unknown),
                       doctest::Contains("Plumber"), Error);
}

TEST_CASE("derive-from-ratings marker resolves through the override map") {
  json config = minimal_config();
  config["requirements"][0]["criteria"][0]["ahp_weight"] = "derive-from-ratings";
  CHECK_THROWS_AS(load_tree(config), Error);

  const std::map<std::string, double> override_map = {{"K1", 1.0}};
  TreeLoadOptions opts;
  opts.ahp_weights = &override_map;
  CHECK(load_tree(config, opts).find_criterion("K1")->ahp_weight == 1.0);
}

TEST_CASE("derive_circularity_tree prunes waste and renormalizes the group") {
  const DecisionTree sus = testing::sustainability_tree();
  const WeightTableDoc doc =
      load_weight_table_file(testing::data_path("circularity_weights.json"));
  const WeightTable& general = doc.profiles.at("General");

  const DecisionTree derived = derive_circularity_tree(sus, general);
  CHECK(derived.paradigm == Paradigm::Circularity);
  CHECK(derived.criterion_count() == 11);
  CHECK(derived.indicator_count() == 25);
  CHECK(validate_tree(derived).empty());

  // Environment group: raw column {0.25864, 0.23390, 0.23220} scaled by its
  // own sum (0.72474), per the published table.
  const Requirement& env = derived.requirements[2];
  REQUIRE(env.criteria.size() == 3);
  CHECK(env.criteria[0].name == "Material");
  CHECK(env.criteria[2].name == "CO2");
  CHECK(env.criteria[2].id == "C8");  // slid down after the prune
  CHECK(env.criteria[0].ahp_weight == doctest::Approx(0.25864 / 0.72474).epsilon(1e-9));
  CHECK(env.criteria[1].ahp_weight == doctest::Approx(0.23390 / 0.72474).epsilon(1e-9));
  CHECK(env.criteria[2].ahp_weight == doctest::Approx(0.23220 / 0.72474).epsilon(1e-9));
  double env_sum = 0.0;
  for (const auto& crit : env.criteria) env_sum += crit.ahp_weight;
  CHECK(env_sum == doctest::Approx(1.0).epsilon(1e-9));

  // Matches the bundled circularity config exactly.
  CHECK(derived == testing::circularity_tree());
}

TEST_CASE("derive_circularity_tree is idempotent on its own output") {
  const DecisionTree sus = testing::sustainability_tree();
  const WeightTableDoc doc =
      load_weight_table_file(testing::data_path("circularity_weights.json"));
  const WeightTable& general = doc.profiles.at("General");
  const DecisionTree once = derive_circularity_tree(sus, general);
  const DecisionTree twice = derive_circularity_tree(once, general);
  CHECK(once == twice);
}

TEST_CASE("derive_circularity_tree without a waste criterion only flips the paradigm") {
  const DecisionTree tree = load_tree(minimal_config());
  const DecisionTree derived = derive_circularity_tree(tree, {});
  CHECK(derived.paradigm == Paradigm::Circularity);
  DecisionTree expected = tree;
  expected.paradigm = Paradigm::Circularity;
  CHECK(derived == expected);
}

TEST_CASE("derive_circularity_tree reports missing weight entries") {
  const DecisionTree sus = testing::sustainability_tree();
  WeightTable incomplete = {{"Cost", 0.4}, {"Time", 0.3}};
  CHECK_THROWS_WITH_AS(derive_circularity_tree(sus, incomplete),
                       doctest::Contains("missing entries"), Error);
}
