#include "core/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace difflab {

namespace {
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<SvgSeries>& series) {
  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmin < xmax)) xmax = xmin + 1.0;
  if (!(ymin < ymax)) ymax = ymin + 1.0;
  const double px = 0.03 * (xmax - xmin), py = 0.06 * (ymax - ymin);
  xmin -= px;
  xmax += px;
  ymin -= py;
  ymax += py;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
         num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         title + "</text>\n";
  // axes
  out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(W - mr) +
         "\" y2=\"" + num(H - mb) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    out += "<text x=\"" + num(X(xv)) + "\" y=\"" + num(H - mb + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + num(xv) + "</text>\n";
    out += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(Y(yv) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + num(yv) + "</text>\n";
    out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(Y(yv)) + "\" x2=\"" + num(W - mr) +
           "\" y2=\"" + num(Y(yv)) + "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }
  out += "<text x=\"" + num(W / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
  out += "<text x=\"18\" y=\"" + num(H / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 18 " + num(H / 2) + ")\">" + ylabel + "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string pts;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += num(X(s.x[i])) + "," + num(Y(s.y[i])) + " ";
    }
    const char* color = kColors[si % 8];
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.6\"/>\n";
    out += "<text x=\"" + num(W - mr - 6) + "\" y=\"" + num(mt + 16.0 * (si + 1)) +
           "\" text-anchor=\"end\" font-size=\"12\" fill=\"" + color + "\">" + s.label +
           "</text>\n";
  }
  out += "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("svg: cannot open " + path);
  f << out;
}

}  // namespace difflab
