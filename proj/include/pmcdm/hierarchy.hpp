#ifndef PMCDM_HIERARCHY_HPP
#define PMCDM_HIERARCHY_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pmcdm {

enum class Paradigm { Sustainability, Circularity };

std::string to_string(Paradigm p);
Paradigm paradigm_from_string(std::string_view s);

struct Indicator {
  std::string id;
  std::string name;

  bool operator==(const Indicator&) const = default;
};

struct Criterion {
  std::string id;
  std::string name;
  double ahp_weight = 0.0;  // share within the parent requirement group
  std::vector<Indicator> indicators;

  bool operator==(const Criterion&) const = default;
};

struct Requirement {
  std::string id;
  std::string name;
  double weight = 0.0;
  std::vector<Criterion> criteria;

  bool operator==(const Requirement&) const = default;
};

/// The four-layer decision tree: requirements hold criteria, criteria hold
/// indicators. Immutable after load; share freely across threads.
struct DecisionTree {
  Paradigm paradigm = Paradigm::Sustainability;
  std::string stakeholder_profile = "General";
  std::vector<Requirement> requirements;

  std::size_t criterion_count() const;
  std::size_t indicator_count() const;
  std::vector<std::string> indicator_ids() const;  // tree order
  const Criterion* find_criterion(std::string_view id) const;

  bool operator==(const DecisionTree&) const = default;
};

struct TreeLoadOptions {
  std::optional<Paradigm> expected_paradigm;    // must match the document
  std::optional<std::string> profile_override;  // pick a weight column
  // Fills criteria whose weight is absent or marked "derive-from-ratings".
  const std::map<std::string, double>* ahp_weights = nullptr;
  // Leave such criteria at weight NaN instead of failing; the caller must
  // fill them (e.g. from a ratings run) before validation can pass.
  bool allow_unresolved_weights = false;
};

/// Builds the tree from a parsed document without enforcing invariants.
/// Structural problems (missing fields, bad types) still throw Parse errors.
DecisionTree parse_tree(const nlohmann::json& config, const TreeLoadOptions& opts = {});
DecisionTree parse_tree_file(const std::string& path, const TreeLoadOptions& opts = {});

/// parse_tree + validate_tree; throws Domain listing every violation.
DecisionTree load_tree(const nlohmann::json& config, const TreeLoadOptions& opts = {});
DecisionTree load_tree_file(const std::string& path, const TreeLoadOptions& opts = {});

nlohmann::json serialize_tree(const DecisionTree& tree);

/// All invariant violations, one line each. Empty report means valid.
std::vector<std::string> validate_tree(const DecisionTree& tree);

/// Criterion weights for one paradigm, keyed by criterion name (preferred)
/// or id. Values are renormalized per group on application, so verbatim
/// table columns are acceptable input.
using WeightTable = std::map<std::string, double, std::less<>>;

struct WeightTableDoc {
  std::map<std::string, WeightTable> profiles;
};

WeightTableDoc load_weight_table_file(const std::string& path);

/// Applies the circularity weight column, prunes the waste criterion, and
/// renormalizes every group. Numeric "C<k>" criterion ids after the removed
/// one slide down by one so the result reads C1..C11. Idempotent.
DecisionTree derive_circularity_tree(const DecisionTree& sustainability_tree,
                                     const WeightTable& circularity_weights,
                                     std::string_view removed_name = "Waste");

}  // namespace pmcdm

#endif
