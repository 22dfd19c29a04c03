#ifndef PMCDM_AHP_HPP
#define PMCDM_AHP_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmcdm/hierarchy.hpp"

namespace pmcdm {

struct RatingsRow {
  std::string respondent;
  std::string group;
  std::map<std::string, double> ratings;  // criterion id -> 0..10
};

struct RatingsTable {
  std::vector<std::string> criterion_ids;  // header order
  std::vector<RatingsRow> rows;

  std::vector<std::string> groups() const;  // distinct, first-seen order
};

/// CSV columns: respondent,group,<criterion id>... with integer ratings 0..10.
RatingsTable load_ratings(const std::string& csv_text, const std::string& source_name);
RatingsTable load_ratings_file(const std::string& path);

/// Positive reciprocal comparison matrix (a_ji = 1 / a_ij, a_ii = 1).
class PairwiseMatrix {
 public:
  explicit PairwiseMatrix(std::size_t size);

  /// Ratio construction a_ij = r_i / r_j; consistent by construction.
  static PairwiseMatrix from_ratings(std::span<const double> mean_ratings);

  std::size_t size() const { return size_; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * size_ + j]; }
  void set(std::size_t i, std::size_t j, double value);

  /// Max reciprocity defect |a_ij * a_ji - 1| over all entries.
  double reciprocity_defect() const;

 private:
  std::size_t size_;
  std::vector<double> cells_;
};

struct EigenResult {
  std::vector<double> weights;  // normalized principal eigenvector
  double lambda_max = 0.0;
};

/// Power iteration to relative tolerance 1e-10, at most 10000 iterations.
EigenResult principal_eigen(const PairwiseMatrix& matrix);
std::vector<double> principal_weights(const PairwiseMatrix& matrix);

/// CR = ((lambda_max - k) / (k - 1)) / RI(k); 0 for k <= 2, error for k > 10.
double consistency_ratio(const PairwiseMatrix& matrix);

struct GroupWeights {
  std::map<std::string, double> weights;  // criterion id -> share, sums to 1
  double consistency_ratio = 0.0;
};

/// Per requirement group: mean ratings over the filtered respondents ->
/// ratio matrix -> principal weights. "General" pools every respondent.
/// Ratings of 0 are floored to 0.5 before averaging so "not relevant"
/// becomes a near-zero weight instead of a division by zero.
std::map<std::string, GroupWeights> group_weights(const RatingsTable& table,
                                                  const DecisionTree& tree,
                                                  std::string_view group_filter);

/// Weights already present in a loaded tree (the table-ingestion bypass),
/// in the same shape group_weights produces. CR is 0 by construction.
std::map<std::string, GroupWeights> bypass_group_weights(const DecisionTree& tree);

/// Writes derived weights back onto the tree's criteria. Every criterion
/// must be covered.
void apply_group_weights(DecisionTree& tree,
                         const std::map<std::string, GroupWeights>& weights);

}  // namespace pmcdm

#endif
