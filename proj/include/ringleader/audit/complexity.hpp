#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringleader/audit/checks.hpp"

namespace ringleader::audit {

// One grid point of a time-to-epsilon measurement.
struct ComplexityPoint {
  Algorithm algorithm = Algorithm::Ringleader;
  double L = 0.0;
  double delta = 0.0;  // f(x^0) - f*
  double epsilon = 0.0;
  double sigma_sq = 0.0;
  std::size_t n = 1;
  double tau_n = 0.0;
  double tau_avg = 0.0;
  std::optional<VirtualTime> measured;  // unset when the run never reached eps
};

struct ComplexityFit {
  Algorithm algorithm = Algorithm::Ringleader;
  double noise_ratio = 0.0;  // sigma^2 / (n eps)
  VirtualTime measured_time_to_eps = 0.0;
  double bound_expression = 0.0;  // (L Delta / eps)(tau_n + tau_avg sigma^2 / (n eps))
  double fitted_constant = 0.0;
};

inline double time_bound_expression(const ComplexityPoint& p) {
  const double ratio = p.sigma_sq / (static_cast<double>(p.n) * p.epsilon);
  return p.L * p.delta / p.epsilon * (p.tau_n + p.tau_avg * ratio);
}

// Unconverged points are dropped and listed in `skipped`.
inline std::vector<ComplexityFit> fit_time_complexity(std::span<const ComplexityPoint> grid,
                                                      std::vector<std::string>* skipped = nullptr) {
  std::vector<ComplexityFit> out;
  for (const auto& p : grid) {
    const double ratio = p.sigma_sq / (static_cast<double>(p.n) * p.epsilon);
    if (!p.measured) {
      if (skipped) {
        skipped->push_back(std::string(to_string(p.algorithm)) + " at sigma^2/(n eps)=" + detail::num(ratio) +
                           " did not reach eps");
      }
      continue;
    }
    ComplexityFit f;
    f.algorithm = p.algorithm;
    f.noise_ratio = ratio;
    f.measured_time_to_eps = *p.measured;
    f.bound_expression = time_bound_expression(p);
    if (!(f.bound_expression > 0.0) || !std::isfinite(f.bound_expression)) {
      throw ConfigurationError("time bound expression must be positive and finite");
    }
    f.fitted_constant = f.measured_time_to_eps / f.bound_expression;
    out.push_back(f);
  }
  return out;
}

// The fitted constant of `a` stays within a factor `spread` across the grid.
inline CheckResult check_fit_bounded(std::span<const ComplexityFit> fits, Algorithm a, double spread) {
  CheckResult r;
  r.name = "complexity-fit";
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& f : fits) {
    if (f.algorithm != a) continue;
    ++r.visited;
    lo = std::min(lo, f.fitted_constant);
    hi = std::max(hi, f.fitted_constant);
  }
  if (r.visited < 2) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "fewer than two converged grid points";
    return r;
  }
  r.detail = std::string(to_string(a)) + " constants in [" + detail::num(lo) + ", " + detail::num(hi) + "]";
  if (!(hi <= spread * lo)) r.violate(0, "constants spread by more than " + detail::num(spread));
  return r;
}

}  // namespace ringleader::audit
