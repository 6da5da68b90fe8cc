#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ringleader/errors.hpp"

namespace ringleader {

enum class ComputeModel { Fixed, Universal };

// Ceiling that treats values within a relative 1e-12 above an integer as that
// integer, so 32 * 4 / 0.1 yields 1280 and not 1281.
inline std::uint64_t snapped_ceil(double v) {
  const double down = std::floor(v);
  if (v - down <= 1e-12 * std::max(1.0, std::abs(v))) return static_cast<std::uint64_t>(down);
  const double up = std::ceil(v);
  return static_cast<std::uint64_t>(up);
}

// Fixed model: min{1/(8nL), eps B / (10 L sigma^2)}; universal model: 1/(10nL).
inline double theory_stepsize(std::size_t n, double L, double sigma_sq, double epsilon, double B_lower,
                              ComputeModel model = ComputeModel::Fixed) {
  if (n < 1 || !(L > 0.0)) throw ConfigurationError("theory stepsize: need n >= 1 and L > 0");
  const double nl = static_cast<double>(n) * L;
  if (model == ComputeModel::Universal) return 1.0 / (10.0 * nl);
  const double first = 1.0 / (8.0 * nl);
  if (sigma_sq == 0.0) return first;
  if (!(epsilon > 0.0) || !(B_lower >= 1.0)) {
    throw ConfigurationError("theory stepsize: need eps > 0 and B >= 1 when sigma_sq > 0");
  }
  return std::min(first, epsilon * B_lower / (10.0 * L * sigma_sq));
}

// Fixed model: ceil(32 n L Delta / eps + 40 L Delta sigma^2 / (B eps^2));
// universal model: ceil(160 L Delta / eps).
inline std::uint64_t predicted_iterations(std::size_t n, double L, double delta, double sigma_sq,
                                          double epsilon, double B_lower,
                                          ComputeModel model = ComputeModel::Fixed) {
  if (n < 1 || !(L > 0.0) || !(delta >= 0.0) || !(epsilon > 0.0)) {
    throw ConfigurationError("predicted iterations: need n >= 1, L > 0, Delta >= 0, eps > 0");
  }
  if (model == ComputeModel::Universal) return snapped_ceil(160.0 * L * delta / epsilon);
  double k = 32.0 * static_cast<double>(n) * L * delta / epsilon;
  if (sigma_sq > 0.0) {
    if (!(B_lower >= 1.0)) throw ConfigurationError("predicted iterations: need B >= 1");
    k += 40.0 * L * delta * sigma_sq / (B_lower * epsilon * epsilon);
  }
  return snapped_ceil(k);
}

}  // namespace ringleader
