#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ringleader/cli/aggregate.hpp"

namespace ringleader::cli {

struct PlotSeries {
  std::string label;
  Band band;
};

namespace detail {

inline std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Static plot: virtual time on x, log10 of the median ||grad f||^2 on y,
// the interquartile range as a translucent band. Non-finite and
// non-positive values are left out.
inline std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
  constexpr double W = 800, H = 500, left = 80, right = 180, top = 40, bottom = 60;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  double tmax = 0.0, ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  auto usable = [](double v) { return std::isfinite(v) && v > 0.0; };
  for (const auto& s : series) {
    for (std::size_t j = 0; j < s.band.grid.size(); ++j) {
      tmax = std::max(tmax, s.band.grid[j]);
      for (double v : {s.band.median[j], s.band.q25[j], s.band.q75[j]}) {
        if (!usable(v)) continue;
        ylo = std::min(ylo, std::log10(v));
        yhi = std::max(yhi, std::log10(v));
      }
    }
  }
  if (!(yhi >= ylo)) ylo = yhi = 0.0;
  ylo = std::floor(ylo);
  yhi = std::max(std::ceil(yhi), ylo + 1.0);
  if (!(tmax > 0.0)) tmax = 1.0;
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](double t) { return left + pw * t / tmax; };
  auto Y = [&](double v) { return top + ph * (yhi - std::log10(v)) / (yhi - ylo); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << detail::escape(title) << "</text>\n";
  for (double e = ylo; e <= yhi + 1e-9; e += 1.0) {
    const double y = top + ph * (yhi - e) / (yhi - ylo);
    os << "<line x1=\"" << left << "\" y1=\"" << detail::fixed(y) << "\" x2=\"" << left + pw << "\" y2=\""
       << detail::fixed(y) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << detail::fixed(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << static_cast<int>(e)
       << "</text>\n";
  }
  for (int j = 0; j <= 5; ++j) {
    const double t = tmax * j / 5.0;
    os << "<text x=\"" << detail::fixed(X(t)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << detail::fixed(t, 1)
       << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">virtual time</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">median squared gradient norm</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& b = series[s].band;
    const char* color = palette[s % std::size(palette)];
    std::ostringstream band, line;
    std::vector<std::size_t> ok;
    for (std::size_t j = 0; j < b.grid.size(); ++j)
      if (usable(b.median[j]) && usable(b.q25[j]) && usable(b.q75[j])) ok.push_back(j);
    for (std::size_t j : ok) band << detail::fixed(X(b.grid[j])) << ',' << detail::fixed(Y(b.q75[j])) << ' ';
    for (auto it = ok.rbegin(); it != ok.rend(); ++it)
      band << detail::fixed(X(b.grid[*it])) << ',' << detail::fixed(Y(b.q25[*it])) << ' ';
    for (std::size_t j : ok) line << detail::fixed(X(b.grid[j])) << ',' << detail::fixed(Y(b.median[j])) << ' ';
    if (!ok.empty()) {
      os << "<polygon points=\"" << band.str() << "\" fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
      os << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.8\"/>\n";
    }
    const double ly = top + 20.0 * static_cast<double>(s) + 10.0;
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n";
    os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << detail::escape(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ringleader::cli
