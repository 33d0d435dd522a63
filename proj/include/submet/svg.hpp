#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <submet/format.hpp>

namespace submet {

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

namespace detail {

inline std::string svg_num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

inline const char* svg_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

}  // namespace detail

/// Self-contained log-log line plot; only strictly positive finite points are
/// drawn.
inline std::string render_loglog_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                                     const std::string& y_label) {
  constexpr double width = 640.0, height = 480.0;
  constexpr double ml = 70.0, mr = 140.0, mt = 20.0, mb = 50.0;

  double lx0 = std::numeric_limits<double>::infinity(), lx1 = -lx0;
  double ly0 = lx0, ly1 = -lx0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      lx0 = std::min(lx0, std::log10(s.x[i]));
      lx1 = std::max(lx1, std::log10(s.x[i]));
      ly0 = std::min(ly0, std::log10(s.y[i]));
      ly1 = std::max(ly1, std::log10(s.y[i]));
    }
  }

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width) + "\" height=\"" +
                    detail::svg_num(height) + "\" viewBox=\"0 0 " + detail::svg_num(width) + " " +
                    detail::svg_num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!(lx0 <= lx1)) {
    out += "<text x=\"50%\" y=\"50%\" text-anchor=\"middle\" font-family=\"sans-serif\">no positive data</text>\n";
    out += "</svg>\n";
    return out;
  }

  lx0 = std::floor(lx0);
  lx1 = std::ceil(lx1);
  ly0 = std::floor(ly0);
  ly1 = std::ceil(ly1);
  if (lx1 <= lx0) lx1 = lx0 + 1.0;
  if (ly1 <= ly0) ly1 = ly0 + 1.0;

  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
  auto py = [&](double y) { return mt + ph - (std::log10(y) - ly0) / (ly1 - ly0) * ph; };

  // frame and decade grid
  out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" + detail::svg_num(pw) +
         "\" height=\"" + detail::svg_num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double k = lx0; k <= lx1 + 0.5; k += 1.0) {
    const double gx = ml + (k - lx0) / (lx1 - lx0) * pw;
    out += "<line x1=\"" + detail::svg_num(gx) + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" + detail::svg_num(gx) +
           "\" y2=\"" + detail::svg_num(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + detail::svg_num(gx) + "\" y=\"" + detail::svg_num(mt + ph + 16.0) +
           "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
           format_double(std::pow(10.0, k)) + "</text>\n";
  }
  for (double k = ly0; k <= ly1 + 0.5; k += 1.0) {
    const double gy = mt + ph - (k - ly0) / (ly1 - ly0) * ph;
    out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(gy) + "\" x2=\"" +
           detail::svg_num(ml + pw) + "\" y2=\"" + detail::svg_num(gy) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + detail::svg_num(ml - 6.0) + "\" y=\"" + detail::svg_num(gy + 4.0) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" + format_double(std::pow(10.0, k)) +
           "</text>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += detail::svg_num(px(s.x[i])) + "," + detail::svg_num(py(s.y[i]));
      out += "<circle cx=\"" + detail::svg_num(px(s.x[i])) + "\" cy=\"" + detail::svg_num(py(s.y[i])) +
             "\" r=\"3\" fill=\"" + detail::svg_color(si) + "\"/>\n";
    }
    if (!pts.empty())
      out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + detail::svg_color(si) +
             "\" stroke-width=\"1.5\"/>\n";
    const double lyp = mt + 16.0 + 18.0 * static_cast<double>(si);
    out += "<line x1=\"" + detail::svg_num(ml + pw + 10.0) + "\" y1=\"" + detail::svg_num(lyp - 4.0) + "\" x2=\"" +
           detail::svg_num(ml + pw + 30.0) + "\" y2=\"" + detail::svg_num(lyp - 4.0) + "\" stroke=\"" +
           detail::svg_color(si) + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::svg_num(ml + pw + 34.0) + "\" y=\"" + detail::svg_num(lyp) +
           "\" font-size=\"12\" font-family=\"sans-serif\">" + s.label + "</text>\n";
  }

  out += "<text x=\"" + detail::svg_num(ml + pw / 2.0) + "\" y=\"" + detail::svg_num(height - 12.0) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" + x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + detail::svg_num(mt + ph / 2.0) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
         detail::svg_num(mt + ph / 2.0) + ")\">" + y_label + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace submet
