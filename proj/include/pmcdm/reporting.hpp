#ifndef PMCDM_REPORTING_HPP
#define PMCDM_REPORTING_HPP

#include <span>
#include <string>
#include <vector>

#include "pmcdm/results_io.hpp"

namespace pmcdm {

enum class ChartKind { Distribution, StackedBar, Radar, Heatmap, RankBar };

std::string to_string(ChartKind kind);

struct ChartRequest {
  ChartKind kind = ChartKind::Heatmap;
  StatLevel level = StatLevel::Criterion;
  int rank_position = 1;  // for RankBar: 1-based position to plot
  std::string output_path;
};

/// Probability-to-color ramp: 0 -> red, 0.5 -> yellow, 1 -> green,
/// linearly interpolated, "#rrggbb".
std::string ramp_color(double value);

/// Renders one chart to SVG text. Throws Domain on invalid kind/level
/// combinations (a radar needs at least three axes, distributions exist at
/// the overall level only).
std::string render_chart(const StatsBundle& bundle, const ChartRequest& request);

/// Renders and writes every request; returns the written paths.
std::vector<std::string> emit_charts(const StatsBundle& bundle,
                                     std::span<const ChartRequest> requests);

/// Grouped-bar comparison of overall means across two result sets.
std::string render_comparison(const StatsBundle& a, const StatsBundle& b);

/// One JSON report: config echo, means, intervals, every probability table,
/// and reading notes. Deterministic byte-for-byte for identical inputs (no
/// timestamps). Accepts one bundle per paradigm.
nlohmann::json summary_report(std::span<const StatsBundle* const> bundles);
void emit_summary(std::span<const StatsBundle* const> bundles, const std::string& path);

}  // namespace pmcdm

#endif
