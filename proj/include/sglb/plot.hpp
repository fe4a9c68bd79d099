#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sglb {

struct PlotOptions {
  std::string x_column;
  // Each entry names a CSV column, or a value of the `metric` column whose
  // `value` field is then plotted.
  std::vector<std::string> y_series;
  bool log_log = false;
  // Dashed line of slope -1/2 through the first point of the first series.
  bool reference_slope = false;
  std::string title;
};

// Self-contained SVG 1.1 line/scatter plot of CSV data. Throws ConfigError
// on missing columns or when no plottable points remain.
std::string cmd_plot(std::string_view csv_text, const PlotOptions& options);

}  // namespace sglb
