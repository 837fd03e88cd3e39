#pragma once

#include <string>
#include <vector>

namespace saddle {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  // empty = pick from the default palette
};

// Self-contained SVG line chart. Long series are decimated for the markup and
// the plotted points are repeated in a trailing comment, so the file carries
// its own data.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series);

// One horizontal band per agent with a vertical tick at every event instant.
void write_event_raster(const std::string& path, const std::string& title,
                        const std::vector<std::vector<double>>& events_per_agent,
                        double t_end);

}  // namespace saddle
