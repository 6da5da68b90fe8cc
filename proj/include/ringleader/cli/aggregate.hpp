#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader::cli {

// Linear-interpolation quantile of a sample; NaN counts as +inf.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ConfigurationError("quantile of an empty sample");
  for (auto& x : v)
    if (std::isnan(x)) x = std::numeric_limits<double>::infinity();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi || v[lo] == v[hi]) return v[lo];
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double median(const std::vector<double>& v) { return quantile(v, 0.5); }

// A run's ||grad f||^2 as a step function of virtual time: `initial` until
// the first update, then the value after each update.
struct StepSeries {
  std::vector<VirtualTime> times;  // update instants
  std::vector<double> after;       // ||grad f(x^{k+1})||^2
  double initial = 0.0;

  double at(VirtualTime t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return initial;
    return after[static_cast<std::size_t>(it - times.begin()) - 1];
  }
};

inline std::vector<VirtualTime> uniform_grid(VirtualTime end, std::size_t points) {
  std::vector<VirtualTime> g;
  for (std::size_t j = 0; j < points; ++j) {
    g.push_back(points == 1 ? 0.0 : end * static_cast<double>(j) / static_cast<double>(points - 1));
  }
  return g;
}

struct Band {
  std::vector<VirtualTime> grid;
  std::vector<double> median, q25, q75;
};

// Across-seed median and interquartile range at each grid time.
inline Band aggregate(std::span<const StepSeries> seeds, const std::vector<VirtualTime>& grid) {
  Band b;
  b.grid = grid;
  std::vector<double> column(seeds.size());
  for (VirtualTime t : grid) {
    for (std::size_t s = 0; s < seeds.size(); ++s) column[s] = seeds[s].at(t);
    b.median.push_back(quantile(column, 0.5));
    b.q25.push_back(quantile(column, 0.25));
    b.q75.push_back(quantile(column, 0.75));
  }
  return b;
}

// Centered moving average with window w; windows are truncated at both ends
// and index 0 is kept as is.
inline std::vector<double> smooth(std::span<const double> y, std::size_t window) {
  if (window < 1) throw ConfigurationError("smoothing window must be >= 1");
  std::vector<double> out(y.begin(), y.end());
  if (window == 1 || y.size() < 2) return out;
  const std::size_t left = (window - 1) / 2;
  const std::size_t right = window / 2;
  for (std::size_t i = 1; i < y.size(); ++i) {
    const std::size_t lo = i >= left ? i - left : 0;
    const std::size_t hi = std::min(y.size() - 1, i + right);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += y[j];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

inline Band smooth(const Band& b, std::size_t window) {
  Band out;
  out.grid = b.grid;
  out.median = smooth(b.median, window);
  out.q25 = smooth(b.q25, window);
  out.q75 = smooth(b.q75, window);
  return out;
}

}  // namespace ringleader::cli
