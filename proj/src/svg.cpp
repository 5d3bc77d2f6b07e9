#include "safegame/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace safegame {

namespace {

std::string color(double shade) {
  const double s = std::clamp(std::isfinite(shade) ? shade : 0.0, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * s), 40,
                static_cast<int>(255 * (1.0 - s)));
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string xLabel, std::string yLabel)
    : title_(std::move(title)), xLabel_(std::move(xLabel)), yLabel_(std::move(yLabel)) {}

void SvgPlot::addPoint(double x, double y, double shade) { points_.push_back({x, y, shade}); }

void SvgPlot::addLine(std::vector<double> xs, std::vector<double> ys, double shade,
                      std::string label) {
  lines_.push_back({std::move(xs), std::move(ys), shade, std::move(label)});
}

std::string SvgPlot::render(int width, int height) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto extend = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const Point& p : points_) extend(p.x, p.y);
  for (const Line& l : lines_) {
    for (std::size_t i = 0; i < l.xs.size() && i < l.ys.size(); ++i) extend(l.xs[i], l.ys[i]);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;

  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title_) << "</text>\n";
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    svg << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(top + ph + 16)
        << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
  }
  svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape(xLabel_) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(top + ph / 2) << ")\">" << escape(yLabel_) << "</text>\n";

  for (const Line& l : lines_) {
    svg << "<polyline fill=\"none\" stroke=\"" << color(l.shade) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.xs.size() && i < l.ys.size(); ++i) {
      if (!std::isfinite(l.xs[i]) || !std::isfinite(l.ys[i])) continue;
      svg << num(sx(l.xs[i])) << "," << num(sy(l.ys[i])) << " ";
    }
    svg << "\">";
    if (!l.label.empty()) svg << "<title>" << escape(l.label) << "</title>";
    svg << "</polyline>\n";
  }
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    svg << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"2.5\" fill=\""
        << color(p.shade) << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace safegame
