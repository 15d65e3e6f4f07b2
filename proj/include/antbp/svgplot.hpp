#pragma once
// Minimal deterministic SVG line charts for the emitted plot files. Output is
// plain text built with fixed-precision formatting so identical data renders
// byte-identically everywhere.
#include <string>
#include <vector>

namespace antbp {

struct PlotSeries {
  std::string label;
  std::vector<double> y;
  std::vector<double> ci;  // optional half-widths; empty = no whiskers
};

// Categorical x axis: one slot per tick label, series indexed in step.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::vector<std::string>& x_ticks,
                           const std::string& y_label,
                           const std::vector<PlotSeries>& series);

}  // namespace antbp
