#include "superlens/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "superlens/format.hpp"

namespace superlens {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void pad() {
    if (!valid()) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

std::string tick_label(double v, bool log_axis) {
  char buf[32];
  if (log_axis) {
    std::snprintf(buf, sizeof(buf), "1e%g", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4g", v);
  }
  return buf;
}

}  // namespace

void write_svg(const SvgChart& chart, std::ostream& os) {
  const int ml = 70, mr = 20, mt = chart.title.empty() ? 20 : 40, mb = 50;
  const double pw = chart.width - ml - mr;
  const double ph = chart.height - mt - mb;

  Range rx, ry;
  for (const auto& s : chart.series) {
    for (double v : s.x) rx.absorb(v);
    for (double v : s.y) ry.absorb(chart.log_y ? (v > 0.0 ? std::log10(v) :NAN) : v);
  }
  rx.pad();
  ry.pad();

  auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return mt + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width
     << "\" height=\"" << chart.height << "\" viewBox=\"0 0 " << chart.width
     << " " << chart.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!chart.title.empty()) {
    os << "<text x=\"" << chart.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\">"
       << chart.title << "</text>\n";
  }

  // axes box and ticks
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int nticks = 5;
  for (int k = 0; k <= nticks; ++k) {
    const double vx = rx.lo + k * (rx.hi - rx.lo) / nticks;
    const double vy = ry.lo + k * (ry.hi - ry.lo) / nticks;
    os << "<line x1=\"" << px(vx) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(vx)
       << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(vx) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(vx, false) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(vy) << "\" x2=\"" << ml
       << "\" y2=\"" << py(vy) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(vy) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << tick_label(vy, chart.log_y) << "</text>\n";
  }
  if (!chart.x_label.empty()) {
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << chart.height - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       << chart.x_label << "</text>\n";
  }
  if (!chart.y_label.empty()) {
    os << "<text x=\"16\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
          "transform=\"rotate(-90 16 "
       << mt + ph / 2 << ")\">" << chart.y_label << "</text>\n";
  }

  // polylines
  for (const auto& s : chart.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      double yv = chart.log_y ? (s.y[i] > 0.0 ? std::log10(s.y[i]) : NAN) : s.y[i];
      if (!std::isfinite(yv) || !std::isfinite(s.x[i])) continue;
      os << px(s.x[i]) << "," << py(yv) << " ";
    }
    os << "\"/>\n";
  }

  // legend
  int ly = mt + 14;
  for (const auto& s : chart.series) {
    if (s.label.empty()) continue;
    os << "<line x1=\"" << ml + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + 40
       << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << "/>\n";
    os << "<text x=\"" << ml + 46 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
    ly += 16;
  }
  os << "</svg>\n";
}

}  // namespace superlens
