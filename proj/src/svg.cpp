#include "iontomo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace iontomo::svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMargin = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

void frame(std::ostringstream& o, const std::string& title,
           const std::string& xl, const std::string& yl, double x0, double x1,
           double y0, double y1) {
  o << "<rect x='" << kMargin << "' y='" << kMargin << "' width='"
    << kWidth - 2 * kMargin << "' height='" << kHeight - 2 * kMargin
    << "' fill='none' stroke='black'/>\n";
  o << "<text x='" << kWidth / 2 << "' y='30' text-anchor='middle'>"
    << escape(title) << "</text>\n";
  o << "<text x='" << kWidth / 2 << "' y='" << kHeight - 15
    << "' text-anchor='middle'>" << escape(xl) << "</text>\n";
  o << "<text x='15' y='" << kHeight / 2 << "' transform='rotate(-90 15 "
    << kHeight / 2 << ")' text-anchor='middle'>" << escape(yl) << "</text>\n";
  o << "<text x='" << kMargin << "' y='" << kHeight - kMargin + 18
    << "' font-size='11'>" << num(x0) << "</text>\n";
  o << "<text x='" << kWidth - kMargin << "' y='" << kHeight - kMargin + 18
    << "' font-size='11' text-anchor='end'>" << num(x1) << "</text>\n";
  o << "<text x='" << kMargin - 5 << "' y='" << kHeight - kMargin
    << "' font-size='11' text-anchor='end'>" << num(y0) << "</text>\n";
  o << "<text x='" << kMargin - 5 << "' y='" << kMargin + 10
    << "' font-size='11' text-anchor='end'>" << num(y1) << "</text>\n";
}

std::string header() {
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
    << "' height='" << kHeight << "' font-family='sans-serif'>\n"
    << "<rect width='100%' height='100%' fill='white'/>\n";
  return o.str();
}

// Diverging blue-white-red map on [-1, 1].
std::string color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  int r, g, b;
  if (v >= 0) {
    r = 255;
    g = b = static_cast<int>(255 * (1.0 - v));
  } else {
    b = 255;
    r = g = static_cast<int>(255 * (1.0 + v));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const std::string& title,
                      const std::string& x_label, const std::string& y_label) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("line_plot: x and y sizes differ");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double sx = (kWidth - 2 * kMargin) / (x1 - x0);
  const double sy = (kHeight - 2 * kMargin) / (y1 - y0);

  std::ostringstream o;
  o << header();
  frame(o, title, x_label, y_label, x0, x1, y0, y1);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* c = kColors[k % std::size(kColors)];
    o << "<polyline fill='none' stroke='" << c << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << num(kMargin + (s.x[i] - x0) * sx) << ','
        << num(kHeight - kMargin - (s.y[i] - y0) * sy) << ' ';
    }
    o << "'/>\n";
    o << "<text x='" << kWidth - kMargin - 5 << "' y='" << kMargin + 15 + 15 * k
      << "' fill='" << c << "' font-size='12' text-anchor='end'>"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap(const std::vector<double>& values, std::size_t rows,
                    std::size_t cols, double x_min, double x_max, double y_min,
                    double y_max, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
  if (values.size() != rows * cols || rows == 0 || cols == 0) {
    throw std::invalid_argument("heatmap: size mismatch");
  }
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  const double cw = static_cast<double>(kWidth - 2 * kMargin) / rows;
  const double ch = static_cast<double>(kHeight - 2 * kMargin) / cols;

  std::ostringstream o;
  o << header();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      o << "<rect x='" << num(kMargin + i * cw) << "' y='"
        << num(kHeight - kMargin - (j + 1) * ch) << "' width='" << num(cw + 0.5)
        << "' height='" << num(ch + 0.5) << "' fill='"
        << color(values[i * cols + j] / vmax) << "'/>\n";
    }
  }
  frame(o, title + " (|max| = " + num(vmax) + ")", x_label, y_label, x_min,
        x_max, y_min, y_max);
  o << "</svg>\n";
  return o.str();
}

}  // namespace iontomo::svg
