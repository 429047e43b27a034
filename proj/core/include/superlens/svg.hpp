#ifndef SUPERLENS_SVG_HPP
#define SUPERLENS_SVG_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace superlens {

/// Minimal line-chart SVG writer, enough for profile overlays and the
/// log-scale scaling-factor chart. Every plot the pipeline emits is backed
/// by a CSV, so these are previews, not the data of record.
struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#d62728";
  bool dashed = false;
  std::string label;
};

struct SvgChart {
  int width = 720;
  int height = 440;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<SvgSeries> series;
};

void write_svg(const SvgChart& chart, std::ostream& os);

}  // namespace superlens

#endif  // SUPERLENS_SVG_HPP
