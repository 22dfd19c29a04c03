#include "pmcdm/value_function.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pmcdm/csv.hpp"
#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

// d^F with the continuous extension 0^F = 0 for every F > 0.
double powd(double d, double f) {
  if (d == 0.0) return 0.0;
  return std::pow(d, f);
}

double response(const ValueFunctionSpec& spec, double distance) {
  return 1.0 - std::exp(-spec.ordinate_factor *
                        powd(distance / spec.abscissa_scale, spec.shape_exponent));
}

void check_spec(const ValueFunctionSpec& spec) {
  if (!(spec.x_max > spec.x_min))
    throw Error(ErrorKind::Domain, "value function has a degenerate score range");
  if (!(spec.shape_exponent > 0.0 && spec.abscissa_scale > 0.0 &&
        spec.ordinate_factor > 0.0))
    throw Error(ErrorKind::Domain, "value function parameters must be positive");
}

}  // namespace

double normalization_factor(const ValueFunctionSpec& spec) {
  check_spec(spec);
  return 1.0 / response(spec, spec.x_max - spec.x_min);
}

double evaluate(const ValueFunctionSpec& spec, double x) {
  check_spec(spec);
  if (!(x >= spec.x_min && x <= spec.x_max)) {
    std::ostringstream msg;
    msg << "score " << x << " outside value-function domain [" << spec.x_min
        << ", " << spec.x_max << "]";
    throw Error(ErrorKind::Domain, msg.str());
  }
  const double distance =
      spec.trend == Trend::Increasing ? std::abs(x - spec.x_min) : std::abs(x - spec.x_max);
  return normalization_factor(spec) * response(spec, distance);
}

std::pair<Trend, std::string> parse_shape_code(std::string_view code) {
  Trend trend;
  if (code.size() >= 2 && (code[0] == 'I' || code[0] == 'i') && code[1] == '-')
    trend = Trend::Increasing;
  else if (code.size() >= 2 && (code[0] == 'D' || code[0] == 'd') && code[1] == '-')
    trend = Trend::Decreasing;
  else
    throw Error(ErrorKind::Parse, "unknown shape code: '" + std::string(code) + "'");

  std::string curvature(code.substr(2));
  for (const char* known : {"Convex", "Concave", "Linear", "S"}) {
    if (curvature == known) return {trend, curvature};
  }
  throw Error(ErrorKind::Parse, "unknown shape code: '" + std::string(code) + "'");
}

std::string shape_code(const ValueFunctionSpec& spec) {
  return (spec.trend == Trend::Increasing ? "I-" : "D-") + spec.curvature;
}

const IndicatorValueEntry& IndicatorValueTable::at(std::string_view indicator_id) const {
  auto it = entries.find(indicator_id);
  if (it == entries.end())
    throw Error(ErrorKind::Domain,
                "no value-function entry for indicator " + std::string(indicator_id));
  return it->second;
}

IndicatorValueTable load_value_table(const std::string& csv_text,
                                     const std::string& source_name) {
  const csv::Table raw = csv::parse(csv_text, source_name);
  const std::vector<std::string> fixed = {"indicator", "x_min", "x_max",
                                          "F",         "C",     "K",
                                          "shape"};
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (raw.header.size() <= i || raw.header[i] != fixed[i])
      throw Error(ErrorKind::Parse,
                  source_name + ": header must start with indicator,x_min,x_max,F,C,K,shape");
  }
  if (raw.header.size() == fixed.size())
    throw Error(ErrorKind::Parse, source_name + ": no scenario columns");

  IndicatorValueTable table;
  table.scenario_ids.assign(raw.header.begin() + fixed.size(), raw.header.end());

  for (const auto& row : raw.rows) {
    const std::string& id = row[0];
    const std::string ctx = source_name + ", indicator " + id;
    if (table.entries.count(id))
      throw Error(ErrorKind::Parse, ctx + ": duplicate indicator id");

    IndicatorValueEntry entry;
    entry.spec.x_min = csv::to_number(row[1], ctx);
    entry.spec.x_max = csv::to_number(row[2], ctx);
    entry.spec.shape_exponent = csv::to_number(row[3], ctx);
    entry.spec.abscissa_scale = csv::to_number(row[4], ctx);
    entry.spec.ordinate_factor = csv::to_number(row[5], ctx);
    auto [trend, curvature] = parse_shape_code(row[6]);
    entry.spec.trend = trend;
    entry.spec.curvature = curvature;
    check_spec(entry.spec);

    for (std::size_t s = 0; s < table.scenario_ids.size(); ++s) {
      const double x = csv::to_number(row[fixed.size() + s], ctx);
      if (!(x >= entry.spec.x_min && x <= entry.spec.x_max)) {
        std::ostringstream msg;
        msg << ctx << ": score " << x << " for scenario " << table.scenario_ids[s]
            << " outside [" << entry.spec.x_min << ", " << entry.spec.x_max << "]";
        throw Error(ErrorKind::Domain, msg.str());
      }
      entry.scores.push_back(x);
    }
    table.indicator_ids.push_back(id);
    table.entries.emplace(id, std::move(entry));
  }
  if (table.entries.empty())
    throw Error(ErrorKind::Parse, source_name + ": no indicator rows");
  return table;
}

IndicatorValueTable load_value_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_value_table(ss.str(), path);
}

}  // namespace pmcdm
