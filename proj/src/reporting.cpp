#include "pmcdm/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmcdm/error.hpp"

namespace pmcdm {

namespace {

std::string fmt(double v, int decimals = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

class SvgDoc {
 public:
  SvgDoc(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    body_ << "<rect x=\"" << fmt(x, 2) << "\" y=\"" << fmt(y, 2) << "\" width=\""
          << fmt(w, 2) << "\" height=\"" << fmt(h, 2) << "\" fill=\"" << fill
          << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0) {
    body_ << "<line x1=\"" << fmt(x1, 2) << "\" y1=\"" << fmt(y1, 2) << "\" x2=\""
          << fmt(x2, 2) << "\" y2=\"" << fmt(y2, 2) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"" << fmt(width, 2) << "\"/>\n";
  }

  void poly(const std::vector<std::pair<double, double>>& points, const std::string& stroke,
            const std::string& fill, bool closed, double opacity = 1.0) {
    body_ << (closed ? "<polygon points=\"" : "<polyline points=\"");
    for (const auto& [x, y] : points) body_ << fmt(x, 2) << ',' << fmt(y, 2) << ' ';
    body_ << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" fill-opacity=\""
          << fmt(opacity, 2) << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 11.0,
            const std::string& anchor = "middle", const std::string& fill = "#222222") {
    body_ << "<text x=\"" << fmt(x, 2) << "\" y=\"" << fmt(y, 2) << "\" font-size=\""
          << fmt(size, 1) << "\" text-anchor=\"" << anchor
          << "\" font-family=\"sans-serif\" fill=\"" << fill << "\">" << xml_escape(s)
          << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << fmt(width_, 0) << "\" height=\"" << fmt(height_, 0) << "\" viewBox=\"0 0 "
        << fmt(width_, 0) << ' ' << fmt(height_, 0) << "\">\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  double width_, height_;
  std::ostringstream body_;
};

const std::vector<std::string> kSeriesColors = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                                "#d62728", "#9467bd", "#8c564b"};

struct LevelData {
  std::vector<std::string> node_ids;
  const RankProbabilityTable* ranks = nullptr;
  std::vector<std::vector<double>> means;  // [scenario][node]
};

LevelData level_data(const StatsBundle& bundle, StatLevel level) {
  LevelData data;
  switch (level) {
    case StatLevel::Overall:
      data.node_ids = {"overall"};
      data.ranks = &bundle.overall_ranks;
      for (const auto& m : bundle.means.overall) data.means.push_back({m});
      break;
    case StatLevel::Requirement:
      data.node_ids = bundle.result.requirement_ids;
      data.ranks = &bundle.requirement_ranks;
      data.means = bundle.means.requirements;
      break;
    case StatLevel::Criterion:
      data.node_ids = bundle.result.criterion_ids;
      data.ranks = &bundle.criterion_ranks;
      data.means = bundle.means.criteria;
      break;
  }
  return data;
}

std::string chart_title(const StatsBundle& bundle, const std::string& what) {
  return to_string(bundle.result.paradigm) + ": " + what;
}

std::string render_heatmap(const StatsBundle& bundle, StatLevel level) {
  const LevelData data = level_data(bundle, level);
  const auto& scenarios = bundle.result.scenario_ids;
  const double cell_w = 64, cell_h = 36, left = 70, top = 50;
  const double width = left + cell_w * static_cast<double>(data.node_ids.size()) + 20;
  const double height = top + cell_h * static_cast<double>(scenarios.size()) + 30;

  SvgDoc svg(width, height);
  svg.text(width / 2, 22, chart_title(bundle, "first-rank probability by " + to_string(level)),
           13);
  for (std::size_t c = 0; c < data.node_ids.size(); ++c)
    svg.text(left + cell_w * (static_cast<double>(c) + 0.5), top - 8, data.node_ids[c], 11);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const double y = top + cell_h * static_cast<double>(s);
    svg.text(left - 10, y + cell_h / 2 + 4, scenarios[s], 11, "end");
    for (std::size_t c = 0; c < data.node_ids.size(); ++c) {
      const double p = data.ranks->nodes[c].prob[s][0];
      const double x = left + cell_w * static_cast<double>(c);
      svg.rect(x, y, cell_w, cell_h, ramp_color(p), "#ffffff");
      svg.text(x + cell_w / 2, y + cell_h / 2 + 4, fmt(p), 11,
               "middle", p > 0.25 && p < 0.75 ? "#333333" : "#ffffff");
    }
  }
  return svg.str();
}

std::string render_radar(const StatsBundle& bundle, StatLevel level) {
  const LevelData data = level_data(bundle, level);
  const std::size_t n_axes = data.node_ids.size();
  if (n_axes < 3)
    throw Error(ErrorKind::Domain, "radar requires >=3 axes, got " + std::to_string(n_axes));

  const double size = 440, cx = size / 2, cy = size / 2 + 14, radius = 150;
  SvgDoc svg(size, size + 40);
  svg.text(cx, 22, chart_title(bundle, "mean value by " + to_string(level)), 13);

  auto point = [&](std::size_t axis, double value) {
    const double angle = 2.0 * M_PI * static_cast<double>(axis) /
                             static_cast<double>(n_axes) -
                         M_PI / 2.0;
    return std::pair<double, double>{cx + radius * value * std::cos(angle),
                                     cy + radius * value * std::sin(angle)};
  };

  for (std::size_t a = 0; a < n_axes; ++a) {
    const auto [x, y] = point(a, 1.0);
    svg.line(cx, cy, x, y, "#cccccc");
    const auto [lx, ly] = point(a, 1.12);
    svg.text(lx, ly, data.node_ids[a], 10);
  }
  for (double ring : {0.25, 0.5, 0.75, 1.0}) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t a = 0; a < n_axes; ++a) pts.push_back(point(a, ring));
    svg.poly(pts, "#dddddd", "none", true);
  }

  const auto& scenarios = bundle.result.scenario_ids;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t a = 0; a < n_axes; ++a) pts.push_back(point(a, data.means[s][a]));
    const std::string& color = kSeriesColors[s % kSeriesColors.size()];
    svg.poly(pts, color, color, true, 0.15);
    for (std::size_t a = 0; a < n_axes; ++a)
      svg.text(pts[a].first, pts[a].second - 4, fmt(data.means[s][a]), 8, "middle", color);
    svg.text(60 + 110 * static_cast<double>(s), size + 26, scenarios[s], 11, "start", color);
  }
  return svg.str();
}

std::string render_stacked_bar(const StatsBundle& bundle, StatLevel level) {
  if (level != StatLevel::Requirement)
    throw Error(ErrorKind::Domain, "stacked bars are defined at the requirement level");
  const auto& r = bundle.result;
  const auto& scenarios = r.scenario_ids;

  const double bar_w = 70, gap = 50, left = 70, top = 50, plot_h = 260;
  const double width =
      left + (bar_w + gap) * static_cast<double>(scenarios.size()) + 120;
  SvgDoc svg(width, top + plot_h + 60);
  svg.text(width / 2, 22, chart_title(bundle, "requirement contributions to the overall mean"),
           13);

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const double x = left + (bar_w + gap) * static_cast<double>(s);
    double y = top + plot_h;
    for (std::size_t q = 0; q < r.requirement_ids.size(); ++q) {
      // Contribution = requirement weight x mean requirement value.
      const double contribution = r.requirement_weights[q] * bundle.means.requirements[s][q];
      const double h = contribution * plot_h;
      y -= h;
      svg.rect(x, y, bar_w, h, kSeriesColors[q % kSeriesColors.size()], "#ffffff");
      svg.text(x + bar_w / 2, y + h / 2 + 3, fmt(contribution), 9, "middle", "#ffffff");
    }
    svg.text(x + bar_w / 2, top + plot_h + 16, scenarios[s], 11);
  }
  for (std::size_t q = 0; q < r.requirement_ids.size(); ++q) {
    const double y = top + 14 * static_cast<double>(q);
    svg.rect(width - 110, y, 10, 10, kSeriesColors[q % kSeriesColors.size()]);
    svg.text(width - 94, y + 9, r.requirement_ids[q], 10, "start");
  }
  return svg.str();
}

std::string render_distribution(const StatsBundle& bundle, StatLevel level) {
  if (level != StatLevel::Overall)
    throw Error(ErrorKind::Domain, "distributions are tracked at the overall level only");
  const auto& scenarios = bundle.result.scenario_ids;

  const double panel_w = 300, panel_h = 200, top = 46, gap = 26;
  const double width = 40 + (panel_w + gap) * static_cast<double>(scenarios.size());
  SvgDoc svg(width, top + panel_h + 60);
  svg.text(width / 2, 22, chart_title(bundle, "overall value distribution (bars) and CDF (line)"),
           13);

  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const EmpiricalDistribution& dist = bundle.overall_distributions[s];
    const double x0 = 40 + (panel_w + gap) * static_cast<double>(s);
    const double y0 = top;
    svg.rect(x0, y0, panel_w, panel_h, "#fafafa", "#999999");
    svg.text(x0 + panel_w / 2, y0 + panel_h + 34, scenarios[s], 11);

    const double lo = dist.edges.front();
    const double hi = dist.edges.back();
    const double span = hi > lo ? hi - lo : 1.0;
    long peak = 1;
    for (long c : dist.counts) peak = std::max(peak, c);

    for (std::size_t b = 0; b < dist.counts.size(); ++b) {
      const double bx = x0 + (dist.edges[b] - lo) / span * panel_w;
      double bw = (dist.edges[b + 1] - dist.edges[b]) / span * panel_w;
      if (bw <= 0.0) bw = panel_w;  // degenerate single-bin distribution
      const double bh =
          static_cast<double>(dist.counts[b]) / static_cast<double>(peak) * (panel_h - 20);
      svg.rect(bx, y0 + panel_h - bh, bw, bh, "#7fb2d9", "#ffffff");
      svg.text(bx + bw / 2, y0 + panel_h - bh - 3, std::to_string(dist.counts[b]), 7);
    }

    std::vector<std::pair<double, double>> cdf_pts;
    for (std::size_t e = 0; e < dist.edges.size(); ++e) {
      double ex = x0 + (dist.edges[e] - lo) / span * panel_w;
      if (dist.edges.size() == 2 && hi == lo) ex = x0 + (e == 0 ? 0.0 : panel_w);
      cdf_pts.emplace_back(ex, y0 + panel_h - dist.cdf[e] * (panel_h - 20));
    }
    svg.poly(cdf_pts, "#d62728", "none", false);
    svg.text(x0, y0 + panel_h + 14, fmt(lo), 9, "start");
    svg.text(x0 + panel_w, y0 + panel_h + 14, fmt(hi), 9, "end");
  }
  return svg.str();
}

std::string render_rank_bar(const StatsBundle& bundle, StatLevel level, int position) {
  if (level != StatLevel::Overall)
    throw Error(ErrorKind::Domain, "rank bars are defined at the overall level");
  const auto& scenarios = bundle.result.scenario_ids;
  if (position < 1 || position > static_cast<int>(scenarios.size()))
    throw Error(ErrorKind::Domain, "rank position out of range");

  const double bar_w = 80, gap = 40, left = 60, top = 50, plot_h = 220;
  const double width = left + (bar_w + gap) * static_cast<double>(scenarios.size()) + 20;
  SvgDoc svg(width, top + plot_h + 50);
  svg.text(width / 2, 22,
           chart_title(bundle, "probability of ranking " + std::to_string(position) +
                                   (position == 1 ? "st" : position == 2 ? "nd" : "rd")),
           13);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const double p =
        bundle.overall_ranks.nodes[0].prob[s][static_cast<std::size_t>(position - 1)];
    const double x = left + (bar_w + gap) * static_cast<double>(s);
    const double h = p * plot_h;
    svg.rect(x, top + plot_h - h, bar_w, h, ramp_color(p), "#666666");
    svg.text(x + bar_w / 2, top + plot_h - h - 5, fmt(p), 11);
    svg.text(x + bar_w / 2, top + plot_h + 16, scenarios[s], 11);
  }
  return svg.str();
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::Distribution: return "distribution";
    case ChartKind::StackedBar: return "stacked_bar";
    case ChartKind::Radar: return "radar";
    case ChartKind::Heatmap: return "heatmap";
    case ChartKind::RankBar: return "rank_bar";
  }
  return "heatmap";
}

std::string ramp_color(double value) {
  struct Rgb {
    double r, g, b;
  };
  // 0 -> red, 0.5 -> yellow, 1 -> green.
  const Rgb red{0xd7, 0x30, 0x27}, yellow{0xff, 0xff, 0xbf}, green{0x1a, 0x98, 0x50};
  const double v = std::clamp(value, 0.0, 1.0);
  const Rgb lo = v < 0.5 ? red : yellow;
  const Rgb hi = v < 0.5 ? yellow : green;
  const double t = v < 0.5 ? v / 0.5 : (v - 0.5) / 0.5;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(lo.r + (hi.r - lo.r) * t)),
                static_cast<int>(std::lround(lo.g + (hi.g - lo.g) * t)),
                static_cast<int>(std::lround(lo.b + (hi.b - lo.b) * t)));
  return buf;
}

std::string render_chart(const StatsBundle& bundle, const ChartRequest& request) {
  switch (request.kind) {
    case ChartKind::Heatmap: return render_heatmap(bundle, request.level);
    case ChartKind::Radar: return render_radar(bundle, request.level);
    case ChartKind::StackedBar: return render_stacked_bar(bundle, request.level);
    case ChartKind::Distribution: return render_distribution(bundle, request.level);
    case ChartKind::RankBar:
      return render_rank_bar(bundle, request.level, request.rank_position);
  }
  throw Error(ErrorKind::Domain, "unknown chart kind");
}

std::vector<std::string> emit_charts(const StatsBundle& bundle,
                                     std::span<const ChartRequest> requests) {
  std::vector<std::string> written;
  for (const auto& request : requests) {
    const std::string svg = render_chart(bundle, request);
    std::ofstream out(request.output_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write file: " + request.output_path);
    out << svg;
    if (!out) throw Error(ErrorKind::Io, "write failed: " + request.output_path);
    written.push_back(request.output_path);
  }
  return written;
}

std::string render_comparison(const StatsBundle& a, const StatsBundle& b) {
  const auto& scenarios = a.result.scenario_ids;
  const double group_w = 120, left = 70, top = 50, plot_h = 220;
  const double width = left + group_w * static_cast<double>(scenarios.size()) + 140;
  SvgDoc svg(width, top + plot_h + 50);
  svg.text(width / 2, 22, "overall mean value: " + to_string(a.result.paradigm) + " vs " +
                              to_string(b.result.paradigm),
           13);

  const std::vector<const StatsBundle*> bundles = {&a, &b};
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const double x0 = left + group_w * static_cast<double>(s);
    for (std::size_t k = 0; k < bundles.size(); ++k) {
      const double mean = bundles[k]->means.overall[s];
      const double h = mean * plot_h;
      const double x = x0 + 44 * static_cast<double>(k);
      svg.rect(x, top + plot_h - h, 38, h, kSeriesColors[k], "#666666");
      svg.text(x + 19, top + plot_h - h - 5, fmt(mean), 10);
    }
    svg.text(x0 + 44, top + plot_h + 16, scenarios[s], 11);
  }
  for (std::size_t k = 0; k < bundles.size(); ++k) {
    const double y = top + 14 * static_cast<double>(k);
    svg.rect(width - 130, y, 10, 10, kSeriesColors[k]);
    svg.text(width - 114, y + 9, to_string(bundles[k]->result.paradigm), 10, "start");
  }
  return svg.str();
}

nlohmann::json summary_report(std::span<const StatsBundle* const> bundles) {
  using nlohmann::json;
  json doc;
  doc["report"] = "pmcdm-summary-v1";

  json paradigms = json::array();
  for (const StatsBundle* bundle : bundles) {
    json node = results_to_json(*bundle, /*include_runs=*/false);
    node.erase("schema");

    bool equal_weights = true;
    const auto& weights = bundle->result.requirement_weights;
    for (double w : weights)
      if (std::abs(w - 1.0 / static_cast<double>(weights.size())) > 1e-12)
        equal_weights = false;
    node["config"]["requirement_weights_equal"] = equal_weights;
    paradigms.push_back(std::move(node));
  }
  doc["paradigms"] = std::move(paradigms);

  doc["notes"] = json::array({
      "Requirement-level weights are configuration inputs; when no elicited values exist "
      "they default to equal shares, and every probability below is conditional on that "
      "choice.",
      "Mean values and value intervals depend strongly on the requirement weights; rank "
      "orders and rank probabilities are the robust outputs of this analysis.",
      "Ties are broken toward the lower scenario index, so a scenario that exactly ties "
      "the leader inherits the full first-rank probability only when it has the lower "
      "index.",
  });
  return doc;
}

void emit_summary(std::span<const StatsBundle* const> bundles, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write file: " + path);
  out << summary_report(bundles).dump(1) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

}  // namespace pmcdm
