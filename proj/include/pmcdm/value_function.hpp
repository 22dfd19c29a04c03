#ifndef PMCDM_VALUE_FUNCTION_HPP
#define PMCDM_VALUE_FUNCTION_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pmcdm {

enum class Trend { Increasing, Decreasing };

/// Parameters of one satisfaction curve. The curve maps a raw score in
/// [x_min, x_max] to a value in [0, 1]:
///
///   value(x) = B * (1 - exp(-K * (d / C)^F))
///   B        = 1 / (1 - exp(-K * ((x_max - x_min) / C)^F))
///
/// where d is the distance from the worst end: |x - x_min| for increasing
/// curves, |x - x_max| for decreasing ones, so the best end always scores
/// exactly 1 and the worst end exactly 0.
struct ValueFunctionSpec {
  double x_min = 0.0;
  double x_max = 10.0;
  double shape_exponent = 1.0;   // F
  double abscissa_scale = 1.0;   // C, in score units
  double ordinate_factor = 1.0;  // K
  Trend trend = Trend::Increasing;
  std::string curvature;  // Convex | Concave | Linear | S (metadata only)

  bool operator==(const ValueFunctionSpec&) const = default;
};

/// The B factor above. Always >= 1 for a valid spec.
double normalization_factor(const ValueFunctionSpec& spec);

/// Satisfaction value in [0, 1]; throws Domain when x is outside the range.
double evaluate(const ValueFunctionSpec& spec, double x);

/// "I-Convex" / "D-S" style shape codes -> (trend, curvature label).
std::pair<Trend, std::string> parse_shape_code(std::string_view code);
std::string shape_code(const ValueFunctionSpec& spec);

struct IndicatorValueEntry {
  ValueFunctionSpec spec;
  std::vector<double> scores;  // one per scenario, in scenario_ids order
};

struct IndicatorValueTable {
  std::vector<std::string> scenario_ids;
  std::vector<std::string> indicator_ids;  // file order
  std::map<std::string, IndicatorValueEntry, std::less<>> entries;

  const IndicatorValueEntry& at(std::string_view indicator_id) const;
};

/// CSV columns: indicator,x_min,x_max,F,C,K,shape,<scenario>...
IndicatorValueTable load_value_table(const std::string& csv_text,
                                     const std::string& source_name);
IndicatorValueTable load_value_table_file(const std::string& path);

}  // namespace pmcdm

#endif
