#pragma once

#include <string>
#include <vector>

namespace ropesway {

struct PlotSeries {
  std::string label;
  std::string color = "#1f6fb2";
  std::vector<double> x, y;
};

struct PlotLayout {
  int width = 900;
  int height = 420;
  int max_points = 2000;  // series longer than this are stride-decimated
};

// Self-contained SVG line chart: axes, tick labels, legend, one polyline per
// series. Data extents are also emitted as `data-x-min/...` attributes on the
// root element so tests and tools can check ranges without parsing points.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<PlotSeries>& series,
                           const PlotLayout& layout = PlotLayout{});

}  // namespace ropesway
