#pragma once

#include <string>
#include <vector>

namespace edelay::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Minimal standalone SVG line chart with axes, tick labels and a legend.
/// Non-positive values are skipped on log axes.
std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace edelay::cli
