#pragma once

#include <string>
#include <vector>

namespace difflab {

// Self-contained SVG line charts (one file per figure, no external assets).
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<SvgSeries>& series);

}  // namespace difflab
