#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ringleader/problems/problem.hpp"
#include "ringleader/rng.hpp"

namespace ringleader {

struct SmoothnessReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  bool ordering_holds = false;  // L_f <= L_bound <= L_max
  double worst_ratio = 0.0;     // max lhs / rhs over trials with rhs > 0
  std::optional<std::string> witness;

  bool ok() const { return ordering_holds && violations == 0; }
};

// Samples (x, y_1..y_n) tuples and checks
//   ||(1/n) sum_i (grad f_i(x) - grad f_i(y_i))||^2 <= (L^2/n) sum_i ||x - y_i||^2
// with L = L_bound. The left side is grad f(x) - (1/n) sum grad f_i(y_i)
// written so that coincident points give exactly zero.
template <Problem P>
SmoothnessReport verify_smoothness_ordering(const P& problem, std::size_t trials, std::uint64_t seed) {
  const auto& c = problem.constants();
  const double slack = 1e-9;
  SmoothnessReport report;
  report.trials = trials;
  report.ordering_holds = c.L_f <= c.L_bound * (1.0 + slack) && c.L_bound <= c.L_max * (1.0 + slack);

  const std::size_t n = problem.workers();
  const auto d = static_cast<Eigen::Index>(problem.dimension());
  const double L = c.L_bound;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Vector x(d);
    for (auto& e : x) e = 2.0 * rng.normal();
    std::vector<Vector> ys;
    for (std::size_t i = 0; i < n; ++i) {
      Vector y = x;
      if (t > 0 && rng.uniform() >= 0.25) {
        const double scale = rng.uniform(0.01, 3.0);
        for (auto& e : y) e += scale * rng.normal();
      }
      ys.push_back(std::move(y));
    }
    Vector diff = Vector::Zero(d);
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diff += problem.local_gradient(i, x) - problem.local_gradient(i, ys[i]);
      dist += (x - ys[i]).squaredNorm();
    }
    diff /= static_cast<double>(n);
    const double lhs = diff.squaredNorm();
    const double rhs = L * L / static_cast<double>(n) * dist;
    if (rhs > 0.0) report.worst_ratio = std::max(report.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + slack)) {
      ++report.violations;
      if (!report.witness) {
        std::ostringstream w;
        w << "trial " << t << ": lhs=" << lhs << " rhs=" << rhs << " x=[" << x.transpose() << "]";
        report.witness = w.str();
      }
    }
  }
  return report;
}

}  // namespace ringleader
