#include "ropesway/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ropesway/errors.hpp"

namespace ropesway {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Extent {
  double lo = 0.0, hi = 1.0;

  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<PlotSeries>& series,
                           const PlotLayout& layout) {
  if (series.empty()) throw DomainError("line_chart_svg: no series given");

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw DomainError("line_chart_svg: series '" + s.label +
                        "' has mismatched x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (first) throw DomainError("line_chart_svg: all series are empty");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    ymax += 1.0;
    ymin -= 1.0;
  }
  // headroom so curves do not touch the frame
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double ml = 70, mr = 20, mt = 34, mb = 48;
  const double pw = layout.width - ml - mr, ph = layout.height - mt - mb;
  const auto X = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  const auto Y = [&](double v) {
    return mt + (1.0 - (v - ymin) / (ymax - ymin)) * ph;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << layout.width
      << "\" height=\"" << layout.height << "\" data-x-min=\"" << num(xmin)
      << "\" data-x-max=\"" << num(xmax) << "\" data-y-min=\"" << num(ymin)
      << "\" data-y-max=\"" << num(ymax) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << layout.width / 2 << "\" y=\"20\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";

  // frame + ticks
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / ticks;
    const double fy = ymin + (ymax - ymin) * i / ticks;
    svg << "<line x1=\"" << X(fx) << "\" y1=\"" << mt + ph << "\" x2=\""
        << X(fx) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << X(fx) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(fx) << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << Y(fy) << "\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << Y(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(fy) << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << layout.height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  int legend_i = 0;
  for (const auto& s : series) {
    const std::size_t n = s.x.size();
    const std::size_t stride =
        std::max<std::size_t>(1, n / static_cast<std::size_t>(layout.max_points));
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      svg << num(X(s.x[i])) << "," << num(Y(s.y[i]));
      if (i + stride < n) svg << " ";
    }
    if (stride > 1 && (n - 1) % stride != 0)  // keep the final sample
      svg << " " << num(X(s.x[n - 1])) << "," << num(Y(s.y[n - 1]));
    svg << "\"/>\n";
    if (!s.label.empty()) {
      const double lx = ml + 10, ly = mt + 14 + 16 * legend_i;
      svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\""
          << lx + 18 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
          << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << lx + 24 << "\" y=\"" << ly
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
          << "</text>\n";
      ++legend_i;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ropesway
