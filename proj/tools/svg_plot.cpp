#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace docsim::plot {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 170;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double span = hi - lo;
      lo -= 0.05 * span;
      hi += 0.05 * span;
    }
  }
};

double nice_tick(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.5) step = 1.0;
  else if (frac <= 3.5) step = 2.0;
  else if (frac <= 7.5) step = 5.0;
  return step * mag;
}

std::string trim_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string color(int index) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                                  "#bcbd22", "#e377c2"};
  return palette[index % 10];
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.absorb(v);
    for (double v : s.y) yr.absorb(v);
  }
  if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
    throw std::invalid_argument("svg plot: no finite data");
  }
  yr.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double v) {
    return kMarginLeft + plot_w * (v - xr.lo) / (xr.hi - xr.lo);
  };
  const auto sy = [&](double v) {
    return kMarginTop + plot_h * (1.0 - (v - yr.lo) / (yr.hi - yr.lo));
  };

  std::ofstream out(path);
  if (!out) throw std::invalid_argument("svg plot: cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // frame
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  // ticks and grid
  const double xt = nice_tick(xr.hi - xr.lo);
  for (double v = std::ceil(xr.lo / xt) * xt; v <= xr.hi + 1e-12; v += xt) {
    out << "<line x1=\"" << sx(v) << "\" y1=\"" << kMarginTop << "\" x2=\""
        << sx(v) << "\" y2=\"" << kMarginTop + plot_h
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << sx(v) << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << trim_num(v) << "</text>\n";
  }
  const double yt = nice_tick(yr.hi - yr.lo);
  for (double v = std::ceil(yr.lo / yt) * yt; v <= yr.hi + 1e-12; v += yt) {
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << sy(v) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << sy(v)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << trim_num(v) << "</text>\n";
  }

  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">"
      << y_label << "</text>\n";

  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.3\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    }
    out << "\"/>\n";
  }

  double ly = kMarginTop + 10.0;
  for (const Series& s : series) {
    out << "<line x1=\"" << kWidth - kMarginRight + 12 << "\" y1=\"" << ly
        << "\" x2=\"" << kWidth - kMarginRight + 34 << "\" y2=\"" << ly
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kMarginRight + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
        << "</text>\n";
    ly += 16.0;
  }
  out << "</svg>\n";
}

}  // namespace docsim::plot
