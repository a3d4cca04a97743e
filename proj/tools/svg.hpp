#pragma once

#include <string>
#include <vector>

namespace cli {

// Minimal deterministic SVG line/scatter plot: theory curves are solid lines,
// simulation summaries are dots with error bars, baselines are dashed lines.
// Byte-identical output for identical input.
struct PlotSeries {
  enum class Style { Line, Dots, Dashed };
  Style style = Style::Line;
  std::string label;
  std::vector<double> x, y, ybar; // ybar: half-height of error bars (Dots)
};

struct PlotSpec {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<PlotSeries> series;
};

std::string render_svg(const PlotSpec& spec);

} // namespace cli
