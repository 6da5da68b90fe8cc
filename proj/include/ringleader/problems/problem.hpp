#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace ringleader {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// L_f <= L_bound <= L_max. L_bound is sqrt(mean of L_{f_i}^2), the
// computable constant used wherever the theory asks for L.
struct SmoothnessConstants {
  double L_f = 0.0;
  double L_bound = 0.0;
  double L_max = 0.0;
  std::vector<double> per_worker;
  bool exact = true;  // false when the per-worker values are upper bounds

  static SmoothnessConstants from_per_worker(std::vector<double> per_worker, double L_f,
                                             bool exact = true) {
    SmoothnessConstants c;
    double sq = 0.0;
    for (double v : per_worker) sq += v * v;
    c.L_bound = std::sqrt(sq / static_cast<double>(per_worker.size()));
    c.L_max = *std::max_element(per_worker.begin(), per_worker.end());
    c.L_f = L_f;
    c.per_worker = std::move(per_worker);
    c.exact = exact;
    return c;
  }
};

// f = (1/n) sum f_i with unbiased stochastic gradients of variance <= sigma^2.
template <class P>
concept Problem = requires(const P& p, std::size_t i, const Vector& x, std::uint64_t seed) {
  { p.dimension() } -> std::convertible_to<std::size_t>;
  { p.workers() } -> std::convertible_to<std::size_t>;
  { p.value(x) } -> std::convertible_to<double>;
  { p.gradient(x) } -> std::convertible_to<Vector>;
  { p.local_value(i, x) } -> std::convertible_to<double>;
  { p.local_gradient(i, x) } -> std::convertible_to<Vector>;
  { p.stochastic_gradient(i, x, seed) } -> std::convertible_to<Vector>;
  { p.sigma_sq() } -> std::convertible_to<double>;
  { p.constants() } -> std::convertible_to<SmoothnessConstants>;
  { p.initial_point() } -> std::convertible_to<Vector>;
  { p.f_star_lower() } -> std::convertible_to<double>;
};

template <Problem P>
double initial_gap(const P& problem) {
  return problem.value(problem.initial_point()) - problem.f_star_lower();
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

// Largest absolute eigenvalue of a symmetric matrix.
inline double spectral_radius_symmetric(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

}  // namespace ringleader
