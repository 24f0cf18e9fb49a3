#pragma once

// Minimal SVG figures: a joint-spectrum heatmap and x-y line plots.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "spdcshape/biphoton.hpp"

namespace spdc::svg {

inline std::string num(double v, int digits = 2) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, r.ptr);
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

// Perceptually ordered dark-blue to yellow ramp.
inline std::string color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  static const double stops[5][3] = {{13, 8, 135}, {126, 3, 168}, {204, 71, 120}, {248, 149, 64}, {240, 249, 33}};
  const double f = t * 4.0;
  const int i = std::min(static_cast<int>(f), 3);
  const double u = f - i;
  char buf[8];
  int rgb[3];
  for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[i][k] * (1 - u) + stops[i + 1][k] * u));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

struct Frame {
  double left = 70, top = 40, width = 420, height = 420;
};

inline std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w, 0) + "\" height=\"" + num(h, 0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, const std::string& anchor = "middle",
                        double rotate = 0.0) {
  std::string t = "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\"";
  if (rotate != 0.0) t += " transform=\"rotate(" + num(rotate, 0) + " " + num(x) + " " + num(y) + ")\"";
  return t + ">" + escape(s) + "</text>\n";
}

/// Heatmap of S over (Lambda_s, Lambda_i); signal on x, idler on y.
inline std::string heatmap(const JointSpectrum& s, const std::string& title) {
  Frame f;
  std::string o = header(f.left + f.width + 90, f.top + f.height + 60);
  o += text(f.left + f.width / 2, 24, title);
  double peak = 0.0;
  for (double v : s.values) peak = std::max(peak, v);
  if (!(peak > 0.0)) peak = 1.0;
  const double cw = f.width / static_cast<double>(s.ns());
  const double ch = f.height / static_cast<double>(s.ni());
  for (std::size_t a = 0; a < s.ns(); ++a)
    for (std::size_t b = 0; b < s.ni(); ++b) {
      const double x = f.left + static_cast<double>(a) * cw;
      const double y = f.top + f.height - static_cast<double>(b + 1) * ch;
      o += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw + 0.05) + "\" height=\"" +
           num(ch + 0.05) + "\" fill=\"" + color(s.at(a, b) / peak) + "\"/>\n";
    }
  o += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
       num(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const double xs0 = s.lambda_s.front(), xs1 = s.lambda_s.back();
  const double yi0 = s.lambda_i.front(), yi1 = s.lambda_i.back();
  for (int k = 0; k <= 4; ++k) {
    const double t = k / 4.0;
    o += text(f.left + t * f.width, f.top + f.height + 16, num(xs0 + t * (xs1 - xs0), 1));
    o += text(f.left - 6, f.top + f.height - t * f.height + 4, num(yi0 + t * (yi1 - yi0), 1), "end");
  }
  o += text(f.left + f.width / 2, f.top + f.height + 40, "Lambda_s (nm)");
  o += text(20, f.top + f.height / 2, "Lambda_i (nm)", "middle", -90);
  // Color bar.
  for (int k = 0; k < 50; ++k) {
    o += "<rect x=\"" + num(f.left + f.width + 20) + "\" y=\"" + num(f.top + f.height * (1 - (k + 1) / 50.0)) +
         "\" width=\"16\" height=\"" + num(f.height / 50.0 + 0.05) + "\" fill=\"" + color((k + 0.5) / 50.0) + "\"/>\n";
  }
  o += text(f.left + f.width + 42, f.top + 8, "1", "start");
  o += text(f.left + f.width + 42, f.top + f.height, "0", "start");
  return o + "</svg>\n";
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string stroke = "#1f77b4";
  bool dashed = false;
};

/// Line plot; log_x spaces the x axis logarithmically.
inline std::string line_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                             const std::string& ylabel, bool log_x = false) {
  Frame f{70, 40, 520, 340};
  std::string o = header(f.left + f.width + 180, f.top + f.height + 60);
  o += text(f.left + f.width / 2, 24, title);
  double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  y1 *= 1.05;
  auto px = [&](double x) { return f.left + (tx(x) - x0) / (x1 - x0) * f.width; };
  auto py = [&](double y) { return f.top + f.height - (y - y0) / (y1 - y0) * f.height; };
  o += "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" + num(f.width) + "\" height=\"" +
       num(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = k / 5.0;
    const double xv = x0 + t * (x1 - x0);
    o += text(f.left + t * f.width, f.top + f.height + 16, log_x ? num(std::pow(10.0, xv), 1) : num(xv, 2));
    o += text(f.left - 6, f.top + f.height - t * f.height + 4, num(y0 + t * (y1 - y0), 2), "end");
  }
  o += text(f.left + f.width / 2, f.top + f.height + 40, xlabel);
  o += text(20, f.top + f.height / 2, ylabel, "middle", -90);
  double ly = f.top + 10;
  for (const auto& s : series) {
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    }
    o += "<polyline fill=\"none\" stroke=\"" + s.stroke + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
    o += "<line x1=\"" + num(f.left + f.width + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(f.left + f.width + 36) +
         "\" y2=\"" + num(ly) + "\" stroke=\"" + s.stroke + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    o += text(f.left + f.width + 42, ly + 4, s.label, "start");
    ly += 18;
  }
  return o + "</svg>\n";
}

}  // namespace spdc::svg
