#include "svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nmcopula::cli {

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 70.0;
constexpr double kPlot = kSize - 2 * kMargin;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void open_document(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" "
        "width=\"800\" height=\"800\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n"
     << "<text x=\"400\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"20\">"
     << xml_escape(title) << "</text>\n";
}

void axes(std::ostringstream& os, const std::string& x_label, const std::string& y_label) {
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlot
     << "\" height=\"" << kPlot << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = k / 4.0;
    const double x = kMargin + t * kPlot;
    const double y = kMargin + (1.0 - t) * kPlot;
    os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kSize - kMargin + 22)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << fixed(t) << "</text>\n";
    os << "<text x=\"" << fixed(kMargin - 10) << "\" y=\"" << fixed(y + 5)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"14\">"
       << fixed(t) << "</text>\n";
  }
  os << "<text x=\"400\" y=\"" << fixed(kSize - 20)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(x_label) << "</text>\n";
  os << "<text x=\"22\" y=\"400\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"16\" transform=\"rotate(-90 22 400)\">"
     << xml_escape(y_label) << "</text>\n";
}

// Blue (low) through white to red (high).
std::string color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  static constexpr std::array<std::array<double, 3>, 3> stops{
      {{49, 54, 149}, {247, 247, 247}, {165, 0, 38}}};
  const double s = t * 2.0;
  const int k = std::min(static_cast<int>(s), 1);
  const double f = s - k;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string scatter_svg(const RowMatrix& points, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
  std::ostringstream os;
  open_document(os, title);
  axes(os, x_label, y_label);
  os << "<g fill=\"#1f4e79\" fill-opacity=\"0.5\">\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double x = kMargin + points(i, 0) * kPlot;
    const double y = kMargin + (1.0 - points(i, 1)) * kPlot;
    os << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"2\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string heatmap_svg(const RowMatrix& grid, const std::string& title) {
  std::ostringstream os;
  open_document(os, title);
  const std::size_t res = grid.rows();
  const std::size_t cells = std::min<std::size_t>(res, 200);
  double lo = grid(0, 0), hi = grid(0, 0);
  for (double v : grid.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const double cell = kPlot / static_cast<double>(cells);
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t a = 0; a < cells; ++a) {
    const std::size_t i = a * res / cells;
    for (std::size_t b = 0; b < cells; ++b) {
      const std::size_t j = b * res / cells;
      const double x = kMargin + a * cell;
      const double y = kMargin + kPlot - (b + 1) * cell;
      os << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\""
         << fixed(cell + 0.05) << "\" height=\"" << fixed(cell + 0.05) << "\" fill=\""
         << (hi > lo ? color((grid(i, j) - lo) / span) : color(0.5)) << "\"/>\n";
    }
  }
  os << "</g>\n";
  axes(os, "u1", "u2");
  os << "<text x=\"730\" y=\"60\" text-anchor=\"end\" font-family=\"sans-serif\" "
        "font-size=\"13\">range "
     << fixed(lo) << " to " << fixed(hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace nmcopula::cli
