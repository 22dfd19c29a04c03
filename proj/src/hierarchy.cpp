#include "pmcdm/hierarchy.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

constexpr double kGroupSumTolerance = 1e-6;
constexpr int kMaxIndicatorsPerCriterion = 5;

using nlohmann::json;

const json& require_field(const json& node, const char* key, const std::string& where) {
  auto it = node.find(key);
  if (it == node.end())
    throw Error(ErrorKind::Parse, where + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const json& node, const char* key, const std::string& where) {
  const json& v = require_field(node, key, where);
  if (!v.is_string())
    throw Error(ErrorKind::Parse, where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

// Numeric criterion ids ("C8") participate in re-indexing after a prune.
std::optional<int> numeric_criterion_index(std::string_view id) {
  if (id.size() < 2 || id[0] != 'C') return std::nullopt;
  int value = 0;
  for (char c : id.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

double resolve_criterion_weight(const json& node, const std::string& profile,
                                const TreeLoadOptions& opts, const std::string& id) {
  const std::string where = "criterion " + id;
  auto from_override = [&]() -> double {
    if (opts.ahp_weights == nullptr) {
      if (opts.allow_unresolved_weights)
        return std::numeric_limits<double>::quiet_NaN();
      throw Error(ErrorKind::Parse,
                  where + ": weight marked derive-from-ratings but no weights supplied");
    }
    auto it = opts.ahp_weights->find(id);
    if (it == opts.ahp_weights->end())
      throw Error(ErrorKind::Domain, where + ": no derived weight available");
    return it->second;
  };

  if (auto it = node.find("ahp_weight"); it != node.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() == "derive-from-ratings") return from_override();
      throw Error(ErrorKind::Parse, where + ": unrecognized ahp_weight marker");
    }
    if (!it->is_number())
      throw Error(ErrorKind::Parse, where + ": ahp_weight must be a number");
    return it->get<double>();
  }
  if (auto it = node.find("ahp_weights"); it != node.end()) {
    if (!it->is_object())
      throw Error(ErrorKind::Parse, where + ": ahp_weights must be an object");
    auto entry = it->find(profile);
    if (entry == it->end()) {
      std::string available;
      for (auto& [k, v] : it->items()) {
        if (!available.empty()) available += ", ";
        available += k;
      }
      throw Error(ErrorKind::Domain, where + ": no weight for profile '" + profile +
                                         "' (available: " + available + ")");
    }
    if (!entry->is_number())
      throw Error(ErrorKind::Parse, where + ": profile weight must be a number");
    return entry->get<double>();
  }
  return from_override();
}

}  // namespace

std::string to_string(Paradigm p) {
  return p == Paradigm::Sustainability ? "sustainability" : "circularity";
}

Paradigm paradigm_from_string(std::string_view s) {
  if (s == "sustainability") return Paradigm::Sustainability;
  if (s == "circularity") return Paradigm::Circularity;
  throw Error(ErrorKind::Parse, "unknown paradigm: '" + std::string(s) + "'");
}

std::size_t DecisionTree::criterion_count() const {
  std::size_t n = 0;
  for (const auto& req : requirements) n += req.criteria.size();
  return n;
}

std::size_t DecisionTree::indicator_count() const {
  std::size_t n = 0;
  for (const auto& req : requirements)
    for (const auto& crit : req.criteria) n += crit.indicators.size();
  return n;
}

std::vector<std::string> DecisionTree::indicator_ids() const {
  std::vector<std::string> ids;
  ids.reserve(indicator_count());
  for (const auto& req : requirements)
    for (const auto& crit : req.criteria)
      for (const auto& ind : crit.indicators) ids.push_back(ind.id);
  return ids;
}

const Criterion* DecisionTree::find_criterion(std::string_view id) const {
  for (const auto& req : requirements)
    for (const auto& crit : req.criteria)
      if (crit.id == id) return &crit;
  return nullptr;
}

namespace {
DecisionTree parse_tree_impl(const json& config, const TreeLoadOptions& opts);
}  // namespace

DecisionTree parse_tree(const json& config, const TreeLoadOptions& opts) {
  try {
    return parse_tree_impl(config, opts);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("tree config: ") + e.what());
  }
}

namespace {
DecisionTree parse_tree_impl(const json& config, const TreeLoadOptions& opts) {
  if (!config.is_object())
    throw Error(ErrorKind::Parse, "tree config: document root must be an object");

  DecisionTree tree;
  if (auto it = config.find("paradigm"); it != config.end())
    tree.paradigm = paradigm_from_string(it->get<std::string>());
  else if (opts.expected_paradigm)
    tree.paradigm = *opts.expected_paradigm;
  else
    throw Error(ErrorKind::Parse, "tree config: missing field 'paradigm'");
  if (opts.expected_paradigm && tree.paradigm != *opts.expected_paradigm)
    throw Error(ErrorKind::Domain,
                "tree config declares paradigm '" + to_string(tree.paradigm) +
                    "', expected '" + to_string(*opts.expected_paradigm) + "'");

  if (opts.profile_override)
    tree.stakeholder_profile = *opts.profile_override;
  else if (auto it = config.find("stakeholder_profile"); it != config.end())
    tree.stakeholder_profile = it->get<std::string>();

  const json& reqs = require_field(config, "requirements", "tree config");
  if (!reqs.is_array() || reqs.empty())
    throw Error(ErrorKind::Parse, "tree config: 'requirements' must be a nonempty array");

  bool any_req_weight = false, all_req_weights = true;
  for (const json& rnode : reqs) {
    Requirement req;
    req.id = require_string(rnode, "id", "requirement");
    req.name = require_string(rnode, "name", "requirement " + req.id);
    if (auto it = rnode.find("weight"); it != rnode.end()) {
      req.weight = it->get<double>();
      any_req_weight = true;
    } else {
      req.weight = -1.0;  // filled below
      all_req_weights = false;
    }

    const json& crits = require_field(rnode, "criteria", "requirement " + req.id);
    if (!crits.is_array())
      throw Error(ErrorKind::Parse, "requirement " + req.id + ": 'criteria' must be an array");
    for (const json& cnode : crits) {
      Criterion crit;
      crit.id = require_string(cnode, "id", "criterion");
      crit.name = require_string(cnode, "name", "criterion " + crit.id);
      crit.ahp_weight =
          resolve_criterion_weight(cnode, tree.stakeholder_profile, opts, crit.id);

      const json& inds = require_field(cnode, "indicators", "criterion " + crit.id);
      if (!inds.is_array())
        throw Error(ErrorKind::Parse, "criterion " + crit.id + ": 'indicators' must be an array");
      for (const json& inode : inds) {
        Indicator ind;
        ind.id = require_string(inode, "id", "indicator");
        ind.name = inode.value("name", ind.id);
        crit.indicators.push_back(std::move(ind));
      }
      req.criteria.push_back(std::move(crit));
    }
    tree.requirements.push_back(std::move(req));
  }

  if (any_req_weight && !all_req_weights)
    throw Error(ErrorKind::Parse,
                "tree config: requirement weights must be given for all requirements or none");
  if (!any_req_weight) {
    const double equal = 1.0 / static_cast<double>(tree.requirements.size());
    for (auto& req : tree.requirements) req.weight = equal;
  }
  return tree;
}
}  // namespace

DecisionTree load_tree(const json& config, const TreeLoadOptions& opts) {
  DecisionTree tree = parse_tree(config, opts);
  auto violations = validate_tree(tree);
  if (!violations.empty()) {
    std::string msg = "tree config invalid:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw Error(ErrorKind::Domain, msg);
  }
  return tree;
}

namespace {

json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

}  // namespace

DecisionTree parse_tree_file(const std::string& path, const TreeLoadOptions& opts) {
  return parse_tree(parse_json_file(path), opts);
}

DecisionTree load_tree_file(const std::string& path, const TreeLoadOptions& opts) {
  return load_tree(parse_json_file(path), opts);
}

json serialize_tree(const DecisionTree& tree) {
  json doc;
  doc["paradigm"] = to_string(tree.paradigm);
  doc["stakeholder_profile"] = tree.stakeholder_profile;
  json reqs = json::array();
  for (const auto& req : tree.requirements) {
    json rnode;
    rnode["id"] = req.id;
    rnode["name"] = req.name;
    rnode["weight"] = req.weight;
    json crits = json::array();
    for (const auto& crit : req.criteria) {
      json cnode;
      cnode["id"] = crit.id;
      cnode["name"] = crit.name;
      cnode["ahp_weight"] = crit.ahp_weight;
      json inds = json::array();
      for (const auto& ind : crit.indicators)
        inds.push_back({{"id", ind.id}, {"name", ind.name}});
      cnode["indicators"] = std::move(inds);
      crits.push_back(std::move(cnode));
    }
    rnode["criteria"] = std::move(crits);
    reqs.push_back(std::move(rnode));
  }
  doc["requirements"] = std::move(reqs);
  return doc;
}

std::vector<std::string> validate_tree(const DecisionTree& tree) {
  std::vector<std::string> report;
  auto note = [&report](const std::string& line) { report.push_back(line); };

  if (tree.requirements.empty()) {
    note("tree has no requirements");
    return report;
  }

  std::set<std::string> req_ids, crit_ids, ind_ids;
  double req_sum = 0.0;
  for (const auto& req : tree.requirements) {
    if (!req_ids.insert(req.id).second) note("duplicate requirement id " + req.id);
    if (!(req.weight > 0.0 && req.weight <= 1.0)) {
      std::ostringstream msg;
      msg << "requirement " << req.id << " weight " << req.weight << " outside (0, 1]";
      note(msg.str());
    }
    req_sum += req.weight;

    if (req.criteria.empty()) note("requirement " + req.id + " has no criteria");
    double group_sum = 0.0;
    for (const auto& crit : req.criteria) {
      if (!crit_ids.insert(crit.id).second) note("duplicate criterion id " + crit.id);
      if (!(crit.ahp_weight > 0.0 && crit.ahp_weight <= 1.0)) {
        std::ostringstream msg;
        msg << "criterion " << crit.id << " weight " << crit.ahp_weight << " outside (0, 1]";
        note(msg.str());
      }
      group_sum += crit.ahp_weight;

      const std::size_t m = crit.indicators.size();
      if (m < 1 || m > kMaxIndicatorsPerCriterion) {
        std::ostringstream msg;
        msg << "criterion " << crit.id << ": m out of range (" << m
            << " indicators, supported 1..5)";
        note(msg.str());
      }
      for (const auto& ind : crit.indicators)
        if (!ind_ids.insert(ind.id).second) note("duplicate indicator id " + ind.id);
    }
    if (!req.criteria.empty() && std::abs(group_sum - 1.0) > kGroupSumTolerance) {
      std::ostringstream msg;
      msg << "criteria weights in requirement " << req.id << " sum " << group_sum
          << ", expected 1";
      note(msg.str());
    }
  }
  if (std::abs(req_sum - 1.0) > kGroupSumTolerance) {
    std::ostringstream msg;
    msg << "requirement weights sum " << req_sum << ", expected 1";
    note(msg.str());
  }
  return report;
}

WeightTableDoc load_weight_table_file(const std::string& path) {
  const json doc = parse_json_file(path);
  const json& profiles = require_field(doc, "profiles", path);
  if (!profiles.is_object())
    throw Error(ErrorKind::Parse, path + ": 'profiles' must be an object");
  WeightTableDoc out;
  for (auto& [profile, entries] : profiles.items()) {
    if (!entries.is_object())
      throw Error(ErrorKind::Parse, path + ": profile '" + profile + "' must be an object");
    WeightTable table;
    for (auto& [key, value] : entries.items()) {
      if (!value.is_number())
        throw Error(ErrorKind::Parse, path + ": weight for '" + key + "' must be a number");
      table[key] = value.get<double>();
    }
    out.profiles.emplace(profile, std::move(table));
  }
  return out;
}

DecisionTree derive_circularity_tree(const DecisionTree& sustainability_tree,
                                     const WeightTable& circularity_weights,
                                     std::string_view removed_name) {
  DecisionTree tree = sustainability_tree;
  tree.paradigm = Paradigm::Circularity;

  // Weight lookup by name first so reapplication after re-indexing stays
  // stable; ids are accepted for custom tables.
  auto lookup = [&circularity_weights](const Criterion& crit) {
    auto it = circularity_weights.find(crit.name);
    if (it == circularity_weights.end()) it = circularity_weights.find(crit.id);
    return it == circularity_weights.end() ? nullptr : &it->second;
  };

  std::optional<int> removed_index;
  for (auto& req : tree.requirements) {
    for (auto it = req.criteria.begin(); it != req.criteria.end();) {
      if (it->name == removed_name) {
        removed_index = numeric_criterion_index(it->id);
        it = req.criteria.erase(it);
      } else {
        ++it;
      }
    }
  }

  if (!circularity_weights.empty()) {
    std::vector<std::string> missing;
    for (auto& req : tree.requirements) {
      for (auto& crit : req.criteria) {
        if (const double* w = lookup(crit))
          crit.ahp_weight = *w;
        else
          missing.push_back(crit.id);
      }
    }
    if (!missing.empty()) {
      std::string msg = "circularity weight table missing entries for:";
      for (const auto& id : missing) msg += " " + id;
      throw Error(ErrorKind::Domain, msg);
    }
  }

  // Group renormalization; for the environment group this spreads the
  // removed criterion's share across the survivors.
  for (auto& req : tree.requirements) {
    double sum = 0.0;
    for (const auto& crit : req.criteria) sum += crit.ahp_weight;
    if (!(sum > 0.0))
      throw Error(ErrorKind::Domain,
                  "requirement " + req.id + " has no positive criterion weights");
    for (auto& crit : req.criteria) crit.ahp_weight /= sum;
  }

  if (removed_index) {
    for (auto& req : tree.requirements) {
      for (auto& crit : req.criteria) {
        if (auto idx = numeric_criterion_index(crit.id); idx && *idx > *removed_index)
          crit.id = "C" + std::to_string(*idx - 1);
      }
    }
  }

  auto violations = validate_tree(tree);
  if (!violations.empty()) {
    std::string msg = "derived circularity tree invalid:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw Error(ErrorKind::Domain, msg);
  }
  return tree;
}

}  // namespace pmcdm
