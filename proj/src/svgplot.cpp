#include "antbp/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace antbp {

namespace {

constexpr double kW = 720, kH = 440;
constexpr double kLeft = 70, kRight = 24, kTop = 44, kBottom = 56;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<std::string>& x_ticks,
                           const std::string& y_label,
                           const std::vector<PlotSeries>& series) {
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const size_t nx = x_ticks.size();

  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& s : series)
    for (size_t k = 0; k < s.y.size(); ++k) {
      double c = k < s.ci.size() ? s.ci[k] : 0.0;
      double a = s.y[k] - c, b = s.y[k] + c;
      if (!any) {
        lo = std::min(0.0, a);
        hi = b;
        any = true;
      } else {
        lo = std::min(lo, a);
        hi = std::max(hi, b);
      }
    }
  if (!any) hi = 1.0;
  if (hi - lo < 1e-12) hi = lo + 1.0;
  hi += (hi - lo) * 0.05;

  auto xpos = [&](size_t k) {
    return nx <= 1 ? kLeft + pw / 2 : kLeft + pw * double(k) / double(nx - 1);
  };
  auto ypos = [&](double v) { return kTop + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::string svg;
  svg += fmt("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
             "font-family=\"sans-serif\">\n",
             kW, kH);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += fmt("<text x=\"%.1f\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">",
             kLeft + pw / 2) +
         esc(title) + "</text>\n";

  // horizontal grid + y tick labels
  for (int k = 0; k <= 4; ++k) {
    double v = lo + (hi - lo) * k / 4.0;
    double y = ypos(v);
    svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", kLeft, y) +
           fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\"/>\n", kLeft + pw, y);
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">",
               kLeft - 6, y + 4);
    char num[48];
    std::snprintf(num, sizeof num, "%.4g", v);
    svg += std::string(num) + "</text>\n";
  }
  // axes
  svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", kLeft, kTop) +
         fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", kLeft, kTop + ph);
  svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", kLeft, kTop + ph) +
         fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", kLeft + pw, kTop + ph);

  // x tick labels, thinned when crowded
  size_t stride = nx > 12 ? (nx + 11) / 12 : 1;
  for (size_t k = 0; k < nx; ++k) {
    if (k % stride != 0 && k + 1 != nx) continue;
    double x = xpos(k);
    svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", x, kTop + ph) +
           fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", x, kTop + ph + 4);
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">", x,
               kTop + ph + 18) +
           esc(x_ticks[k]) + "</text>\n";
  }
  svg += fmt("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"12\">",
             kLeft + pw / 2, kH - 10) +
         esc(x_label) + "</text>\n";
  svg += fmt("<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"12\" "
             "transform=\"rotate(-90 16 %.1f)\">",
             kTop + ph / 2, kTop + ph / 2) +
         esc(y_label) + "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kColors[si % 6];
    std::string pts;
    for (size_t k = 0; k < s.y.size() && k < nx; ++k)
      pts += fmt("%.1f,%.1f ", xpos(k), ypos(s.y[k]));
    if (!pts.empty())
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
    for (size_t k = 0; k < s.y.size() && k < nx; ++k) {
      svg += fmt("<circle cx=\"%.1f\" cy=\"%.1f\" r=\"2.6\" fill=\"", xpos(k),
                 ypos(s.y[k])) +
             color + "\"/>\n";
      double c = k < s.ci.size() ? s.ci[k] : 0.0;
      if (c > 0.0) {
        double x = xpos(k), y0 = ypos(s.y[k] - c), y1 = ypos(s.y[k] + c);
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", x, y0) +
               fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"", x, y1) + color +
               "\" stroke-width=\"1\"/>\n";
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", x - 3, y0) +
               fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"", x + 3, y0) + color + "\"/>\n";
        svg += fmt("<line x1=\"%.1f\" y1=\"%.1f\"", x - 3, y1) +
               fmt(" x2=\"%.1f\" y2=\"%.1f\" stroke=\"", x + 3, y1) + color + "\"/>\n";
      }
    }
    // legend entry
    double ly = kTop + 4 + 16.0 * double(si);
    svg += fmt("<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"",
               kLeft + pw - 150, ly) +
           color + "\"/>\n";
    svg += fmt("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">", kLeft + pw - 136,
               ly + 9) +
           esc(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace antbp
