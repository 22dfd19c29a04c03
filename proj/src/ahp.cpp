#include "pmcdm/ahp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmcdm/csv.hpp"
#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

constexpr double kPowerIterationTolerance = 1e-10;
constexpr int kPowerIterationCap = 10000;
constexpr double kZeroRatingFloor = 0.5;

// Saaty random indices for k = 1..10.
constexpr double kRandomIndex[10] = {0.0,  0.0,  0.58, 0.90, 1.12,
                                     1.24, 1.32, 1.41, 1.45, 1.49};

}  // namespace

std::vector<std::string> RatingsTable::groups() const {
  std::vector<std::string> out;
  for (const auto& row : rows)
    if (std::find(out.begin(), out.end(), row.group) == out.end())
      out.push_back(row.group);
  return out;
}

RatingsTable load_ratings(const std::string& csv_text, const std::string& source_name) {
  const csv::Table raw = csv::parse(csv_text, source_name);
  if (raw.header.size() < 3 || raw.header[0] != "respondent" || raw.header[1] != "group")
    throw Error(ErrorKind::Parse,
                source_name + ": header must be respondent,group,<criterion id>...");

  RatingsTable table;
  table.criterion_ids.assign(raw.header.begin() + 2, raw.header.end());
  for (const auto& row : raw.rows) {
    RatingsRow entry;
    entry.respondent = row[0];
    entry.group = row[1];
    for (std::size_t i = 0; i < table.criterion_ids.size(); ++i) {
      const std::string ctx =
          source_name + ", respondent " + entry.respondent + ", " + table.criterion_ids[i];
      const double value = csv::to_number(row[2 + i], ctx);
      if (!(value >= 0.0 && value <= 10.0) || value != std::floor(value))
        throw Error(ErrorKind::Domain, ctx + ": rating must be an integer in 0..10");
      entry.ratings[table.criterion_ids[i]] = value;
    }
    table.rows.push_back(std::move(entry));
  }
  if (table.rows.empty()) throw Error(ErrorKind::Parse, source_name + ": no respondent rows");
  return table;
}

RatingsTable load_ratings_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_ratings(ss.str(), path);
}

PairwiseMatrix::PairwiseMatrix(std::size_t size)
    : size_(size), cells_(size * size, 1.0) {
  if (size == 0) throw Error(ErrorKind::Domain, "pairwise matrix must be nonempty");
}

PairwiseMatrix PairwiseMatrix::from_ratings(std::span<const double> mean_ratings) {
  if (mean_ratings.empty())
    throw Error(ErrorKind::Domain, "cannot build a pairwise matrix from no ratings");
  for (double r : mean_ratings)
    if (!(r > 0.0))
      throw Error(ErrorKind::Domain, "pairwise construction requires positive ratings");

  PairwiseMatrix matrix(mean_ratings.size());
  for (std::size_t i = 0; i < mean_ratings.size(); ++i)
    for (std::size_t j = 0; j < mean_ratings.size(); ++j)
      matrix.cells_[i * matrix.size_ + j] = mean_ratings[i] / mean_ratings[j];
  return matrix;
}

void PairwiseMatrix::set(std::size_t i, std::size_t j, double value) {
  if (!(value > 0.0))
    throw Error(ErrorKind::Domain, "pairwise entries must be positive");
  cells_[i * size_ + j] = value;
  cells_[j * size_ + i] = 1.0 / value;
}

double PairwiseMatrix::reciprocity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j)
      worst = std::max(worst, std::abs(at(i, j) * at(j, i) - 1.0));
  return worst;
}

EigenResult principal_eigen(const PairwiseMatrix& matrix) {
  const std::size_t k = matrix.size();
  if (matrix.reciprocity_defect() > 1e-9)
    throw Error(ErrorKind::Domain, "pairwise matrix is not reciprocal");

  std::vector<double> v(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  for (int iter = 0; iter < kPowerIterationCap; ++iter) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += matrix.at(i, j) * v[j];
      next[i] = acc;
      sum += acc;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      next[i] /= sum;
      change = std::max(change, std::abs(next[i] - v[i]) / next[i]);
    }
    v.swap(next);
    if (change < kPowerIterationTolerance) {
      // lambda_max as the mean Rayleigh ratio at the converged vector.
      double lambda = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += matrix.at(i, j) * v[j];
        lambda += acc / v[i];
      }
      return {std::move(v), lambda / static_cast<double>(k)};
    }
  }
  throw Error(ErrorKind::Domain, "power iteration did not converge");
}

std::vector<double> principal_weights(const PairwiseMatrix& matrix) {
  return principal_eigen(matrix).weights;
}

double consistency_ratio(const PairwiseMatrix& matrix) {
  const std::size_t k = matrix.size();
  if (k > 10)
    throw Error(ErrorKind::Domain,
                "consistency ratio undefined for more than 10 criteria");
  if (k <= 2) return 0.0;
  const EigenResult eigen = principal_eigen(matrix);
  const double ci = (eigen.lambda_max - static_cast<double>(k)) / (static_cast<double>(k) - 1.0);
  return ci / kRandomIndex[k - 1];
}

std::map<std::string, GroupWeights> group_weights(const RatingsTable& table,
                                                  const DecisionTree& tree,
                                                  std::string_view group_filter) {
  std::vector<const RatingsRow*> selected;
  for (const auto& row : table.rows)
    if (group_filter == "General" || row.group == group_filter) selected.push_back(&row);
  if (selected.empty()) {
    std::string msg = "no respondents in group '" + std::string(group_filter) +
                      "' (available:";
    for (const auto& g : table.groups()) msg += " " + g;
    throw Error(ErrorKind::Domain, msg + ")");
  }

  std::map<std::string, GroupWeights> out;
  for (const auto& req : tree.requirements) {
    std::vector<double> means;
    std::vector<std::string> ids;
    for (const auto& crit : req.criteria) {
      double sum = 0.0;
      for (const RatingsRow* row : selected) {
        auto it = row->ratings.find(crit.id);
        if (it == row->ratings.end())
          throw Error(ErrorKind::Domain,
                      "ratings table has no column for criterion " + crit.id);
        sum += std::max(it->second, kZeroRatingFloor);
      }
      means.push_back(sum / static_cast<double>(selected.size()));
      ids.push_back(crit.id);
    }

    GroupWeights gw;
    if (means.size() == 1) {
      gw.weights[ids[0]] = 1.0;
      gw.consistency_ratio = 0.0;
    } else {
      const PairwiseMatrix matrix = PairwiseMatrix::from_ratings(means);
      const std::vector<double> weights = principal_weights(matrix);
      for (std::size_t i = 0; i < ids.size(); ++i) gw.weights[ids[i]] = weights[i];
      gw.consistency_ratio = consistency_ratio(matrix);
    }
    out.emplace(req.id, std::move(gw));
  }
  return out;
}

std::map<std::string, GroupWeights> bypass_group_weights(const DecisionTree& tree) {
  std::map<std::string, GroupWeights> out;
  for (const auto& req : tree.requirements) {
    GroupWeights gw;
    for (const auto& crit : req.criteria) gw.weights[crit.id] = crit.ahp_weight;
    out.emplace(req.id, std::move(gw));
  }
  return out;
}

void apply_group_weights(DecisionTree& tree,
                         const std::map<std::string, GroupWeights>& weights) {
  for (auto& req : tree.requirements) {
    auto group = weights.find(req.id);
    if (group == weights.end())
      throw Error(ErrorKind::Domain, "no derived weights for requirement " + req.id);
    for (auto& crit : req.criteria) {
      auto it = group->second.weights.find(crit.id);
      if (it == group->second.weights.end())
        throw Error(ErrorKind::Domain, "no derived weight for criterion " + crit.id);
      crit.ahp_weight = it->second;
    }
  }
}

}  // namespace pmcdm
