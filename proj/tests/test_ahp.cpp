#include <cmath>

#include <doctest.h>

#include "pmcdm/ahp.hpp"
#include "pmcdm/error.hpp"
#include "test_helpers.hpp"

using namespace pmcdm;

namespace {

// Independent lambda_max oracle for a 3x3 matrix: bisection on the
// characteristic polynomial det(A - tI).
double oracle_lambda_max_3x3(const PairwiseMatrix& a) {
  auto det = [&](double t) {
    const double m[3][3] = {
        {a.at(0, 0) - t, a.at(0, 1), a.at(0, 2)},
        {a.at(1, 0), a.at(1, 1) - t, a.at(1, 2)},
        {a.at(2, 0), a.at(2, 1), a.at(2, 2) - t},
    };
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  // The principal eigenvalue of a positive reciprocal 3x3 matrix lies in
  // [3, 3 + something small]; bracket generously and bisect.
  double lo = 2.5, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    // det is positive between the largest real root and +inf has sign (-1)^3;
    // pick the side where the sign matches det(hi).
    if (std::signbit(det(mid)) == std::signbit(det(hi)))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

RatingsTable make_ratings(const std::vector<std::array<double, 3>>& econ_rows) {
  // Ratings covering the three Economics criteria of a trimmed tree.
  RatingsTable table;
  table.criterion_ids = {"C1", "C2", "C3"};
  int i = 0;
  for (const auto& row : econ_rows) {
    RatingsRow r;
    r.respondent = "r" + std::to_string(++i);
    r.group = i % 2 == 0 ? "Engineer" : "Architect";
    r.ratings = {{"C1", row[0]}, {"C2", row[1]}, {"C3", row[2]}};
    table.rows.push_back(std::move(r));
  }
  return table;
}

DecisionTree econ_only_tree() {
  DecisionTree tree;
  tree.paradigm = Paradigm::Sustainability;
  Requirement req{"B1", "Economics", 1.0, {}};
  req.criteria.push_back({"C1", "Cost", 0.4, {{"C11", "i"}}});
  req.criteria.push_back({"C2", "Time", 0.3, {{"C21", "i"}}});
  req.criteria.push_back({"C3", "Investment return", 0.3, {{"C31", "i"}}});
  tree.requirements = {req};
  return tree;
}

}  // namespace

TEST_CASE("ratio construction") {
  const PairwiseMatrix m = PairwiseMatrix::from_ratings(std::vector<double>{8.0, 4.0});
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(0, 1) == 2.0);
  CHECK(m.at(1, 0) == 0.5);
  CHECK(m.at(1, 1) == 1.0);

  const PairwiseMatrix equal = PairwiseMatrix::from_ratings(std::vector<double>{5.0, 5.0, 5.0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(equal.at(i, j) == 1.0);

  const PairwiseMatrix m632 = PairwiseMatrix::from_ratings(std::vector<double>{6.0, 3.0, 2.0});
  CHECK(m632.at(0, 2) == doctest::Approx(3.0));
  CHECK(m632.at(1, 2) == doctest::Approx(1.5));
  CHECK(m632.reciprocity_defect() <= 1e-9);

  CHECK_THROWS_AS(PairwiseMatrix::from_ratings(std::vector<double>{}), Error);
  CHECK_THROWS_AS(PairwiseMatrix::from_ratings(std::vector<double>{4.0, 0.0}), Error);
}

TEST_CASE("principal weights of consistent matrices equal normalized ratings") {
  const auto w2 = principal_weights(PairwiseMatrix::from_ratings(std::vector<double>{8.0, 4.0}));
  CHECK(w2[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(w2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  const auto uniform =
      principal_weights(PairwiseMatrix::from_ratings(std::vector<double>{7.0, 7.0, 7.0, 7.0}));
  for (double w : uniform) CHECK(w == doctest::Approx(0.25).epsilon(1e-10));

  const auto w632 =
      principal_weights(PairwiseMatrix::from_ratings(std::vector<double>{6.0, 3.0, 2.0}));
  CHECK(w632[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-8));
  CHECK(w632[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-8));
  CHECK(w632[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-8));
}

TEST_CASE("consistency ratio: consistent matrices, small matrices, the RI table") {
  CHECK(consistency_ratio(PairwiseMatrix::from_ratings(std::vector<double>{6.0, 3.0, 2.0})) ==
        doctest::Approx(0.0).epsilon(1e-8));
  CHECK(consistency_ratio(PairwiseMatrix::from_ratings(std::vector<double>{8.0, 4.0})) == 0.0);

  // Inconsistent 3x3 case, checked against the bisection oracle.
  PairwiseMatrix m(3);
  m.set(0, 1, 2.0);
  m.set(0, 2, 4.0);
  m.set(1, 2, 1.0);
  const double lambda = oracle_lambda_max_3x3(m);
  const double expected_cr = ((lambda - 3.0) / 2.0) / 0.58;
  CHECK(consistency_ratio(m) == doctest::Approx(expected_cr).epsilon(1e-9));
  CHECK(expected_cr > 0.01);  // genuinely inconsistent input

  PairwiseMatrix big(11);
  CHECK_THROWS_AS(consistency_ratio(big), Error);
}

TEST_CASE("group weights: uniform ratings, single respondent, zero flooring") {
  const DecisionTree tree = econ_only_tree();

  const auto uniform = group_weights(make_ratings({{7, 7, 7}, {7, 7, 7}}), tree, "General");
  for (const auto& [id, w] : uniform.at("B1").weights)
    CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(uniform.at("B1").consistency_ratio == doctest::Approx(0.0).epsilon(1e-8));

  const auto single = group_weights(make_ratings({{8, 4, 4}}), tree, "Architect");
  CHECK(single.at("B1").weights.at("C1") == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(single.at("B1").weights.at("C2") == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(single.at("B1").weights.at("C3") == doctest::Approx(0.25).epsilon(1e-10));

  // A zero rating floors to 0.5 rather than dividing by zero.
  const auto floored = group_weights(make_ratings({{8, 0, 4}}), tree, "Architect");
  CHECK(floored.at("B1").weights.at("C2") == doctest::Approx(0.5 / 12.5).epsilon(1e-10));
  double sum = 0.0;
  for (const auto& [id, w] : floored.at("B1").weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("group weights: scale invariance and permutation equivariance") {
  const DecisionTree tree = econ_only_tree();
  const auto base = group_weights(make_ratings({{8, 4, 2}, {6, 5, 4}}), tree, "General");
  // Power-of-two scaling is exact in floating point.
  const auto scaled = group_weights(make_ratings({{32, 16, 8}, {24, 20, 16}}), tree, "General");
  for (const auto& [id, w] : base.at("B1").weights)
    CHECK(scaled.at("B1").weights.at(id) == w);
  // Arbitrary positive scaling agrees to rounding error.
  const auto scaled17 =
      group_weights(make_ratings({{8 * 1.7, 4 * 1.7, 2 * 1.7}}), tree, "General");
  const auto direct = group_weights(make_ratings({{8, 4, 2}}), tree, "General");
  for (const auto& [id, w] : direct.at("B1").weights)
    CHECK(scaled17.at("B1").weights.at(id) == doctest::Approx(w).epsilon(1e-12));

  // Permuting criteria permutes weights identically.
  const auto fwd = group_weights(make_ratings({{9, 6, 3}}), tree, "General");
  RatingsTable permuted = make_ratings({{3, 6, 9}});
  const auto back = group_weights(permuted, tree, "General");
  CHECK(fwd.at("B1").weights.at("C1") == doctest::Approx(back.at("B1").weights.at("C3")));
  CHECK(fwd.at("B1").weights.at("C2") == doctest::Approx(back.at("B1").weights.at("C2")));
}

TEST_CASE("group weights: filter errors") {
  const DecisionTree tree = econ_only_tree();
  const RatingsTable ratings = make_ratings({{8, 4, 4}, {6, 6, 6}});
  CHECK_THROWS_WITH_AS(group_weights(ratings, tree, "Plumber"),
                       doctest::Contains("Architect"), Error);

  RatingsTable missing = ratings;
  for (auto& row : missing.rows) row.ratings.erase("C3");
  CHECK_THROWS_WITH_AS(group_weights(missing, tree, "General"), doctest::Contains("C3"),
                       Error);
}

TEST_CASE("ratings CSV ingestion validates bounds and integrality") {
  const std::string header = "respondent,group,C1,C2\n";
  const RatingsTable ok = load_ratings(header + "r1,Architect,8,0\n", "test");
  CHECK(ok.rows.size() == 1);
  CHECK(ok.groups() == std::vector<std::string>{"Architect"});
  CHECK_THROWS_AS(load_ratings(header + "r1,Architect,8,11\n", "test"), Error);
  CHECK_THROWS_AS(load_ratings(header + "r1,Architect,8,-1\n", "test"), Error);
  CHECK_THROWS_AS(load_ratings(header + "r1,Architect,8,6.5\n", "test"), Error);
  CHECK_THROWS_AS(load_ratings("bad header\n", "test"), Error);
}

TEST_CASE("bundled ratings file loads and produces per-group tables") {
  const RatingsTable ratings = load_ratings_file(testing::data_path("ratings_example.csv"));
  CHECK(ratings.rows.size() == 12);
  CHECK(ratings.groups().size() == 6);
  const DecisionTree tree = testing::sustainability_tree();
  const auto general = group_weights(ratings, tree, "General");
  CHECK(general.size() == 4);
  for (const auto& [req_id, gw] : general) {
    double sum = 0.0;
    for (const auto& [id, w] : gw.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gw.consistency_ratio == doctest::Approx(0.0).epsilon(1e-8));
  }
}

TEST_CASE("bypass ingestion: every profile's groups sum to one") {
  for (const char* file : {"sustainability.json", "circularity.json"}) {
    for (const char* profile : {"General", "Architect", "Engineer", "Manufacturer",
                                "Contractor", "Researcher", "Client"}) {
      TreeLoadOptions opts;
      opts.profile_override = profile;
      const DecisionTree tree = load_tree_file(testing::data_path(file), opts);
      const auto groups = bypass_group_weights(tree);
      for (const auto& [req_id, gw] : groups) {
        double sum = 0.0;
        for (const auto& [id, w] : gw.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("apply_group_weights writes derived weights onto the tree") {
  DecisionTree tree = econ_only_tree();
  const auto derived = group_weights(make_ratings({{8, 4, 4}}), tree, "General");
  apply_group_weights(tree, derived);
  CHECK(tree.find_criterion("C1")->ahp_weight == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(validate_tree(tree).empty());
}
