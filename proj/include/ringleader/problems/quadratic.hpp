#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/problems/problem.hpp"
#include "ringleader/rng.hpp"

namespace ringleader {

// f_i(x) = 0.5 x^T A_i x + b_i^T x with symmetric PSD A_i. Stochastic
// gradients add isotropic Gaussian noise of covariance (sigma^2/d) I, so
// E||noise||^2 = sigma^2 exactly.
class QuadraticProblem {
 public:
  static QuadraticProblem from_matrices(std::vector<Matrix> A, std::vector<Vector> b, Vector x0,
                                        double sigma_sq, bool require_minimizer = true) {
    QuadraticProblem q;
    if (A.empty()) throw ConfigurationError("quadratic: at least one worker is required");
    if (A.size() != b.size()) throw ConfigurationError("quadratic: A and b counts differ");
    if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq)) {
      throw ConfigurationError("quadratic: sigma_sq must be finite and non-negative");
    }
    const auto d = x0.size();
    if (d < 1) throw ConfigurationError("quadratic: dimension must be at least 1");
    std::vector<double> per_worker;
    per_worker.reserve(A.size());
    Matrix mean = Matrix::Zero(d, d);
    Vector b_mean = Vector::Zero(d);
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (A[i].rows() != d || A[i].cols() != d || b[i].size() != d) {
        throw ConfigurationError("quadratic: worker " + std::to_string(i) + " has mismatched shapes");
      }
      const double scale = std::max(1.0, A[i].cwiseAbs().maxCoeff());
      if ((A[i] - A[i].transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ConfigurationError("quadratic: A_" + std::to_string(i) + " is not symmetric");
      }
      Eigen::SelfAdjointEigenSolver<Matrix> solver(A[i], Eigen::EigenvaluesOnly);
      const auto& ev = solver.eigenvalues();
      if (ev.minCoeff() < -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
        throw ConfigurationError("quadratic: A_" + std::to_string(i) + " is not positive semidefinite");
      }
      per_worker.push_back(std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff())));
      mean += A[i];
      b_mean += b[i];
    }
    const double inv_n = 1.0 / static_cast<double>(A.size());
    mean *= inv_n;
    b_mean *= inv_n;

    Eigen::SelfAdjointEigenSolver<Matrix> mean_solver(mean);
    const auto& ev = mean_solver.eigenvalues();
    const double L_f = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
    q.has_minimizer_ = ev.minCoeff() > 1e-12 * std::max(1.0, L_f);
    if (q.has_minimizer_) {
      const Eigen::LLT<Matrix> llt(mean);
      Vector xs = llt.solve(-b_mean);
      xs -= llt.solve(mean * xs + b_mean);  // one refinement step
      q.x_star_ = std::move(xs);
    } else if (require_minimizer) {
      throw ConfigurationError("quadratic: (1/n) sum A_i is singular; no unique minimizer");
    }

    q.A_ = std::move(A);
    q.b_ = std::move(b);
    q.A_mean_ = std::move(mean);
    q.b_mean_ = std::move(b_mean);
    q.x0_ = std::move(x0);
    q.sigma_sq_ = sigma_sq;
    q.noise_scale_ = std::sqrt(sigma_sq / static_cast<double>(d));
    q.constants_ = SmoothnessConstants::from_per_worker(std::move(per_worker), L_f);
    q.f_star_ = q.has_minimizer_ ? q.value(q.x_star_) : std::numeric_limits<double>::quiet_NaN();
    return q;
  }

  std::size_t dimension() const { return static_cast<std::size_t>(x0_.size()); }
  std::size_t workers() const { return A_.size(); }
  double sigma_sq() const { return sigma_sq_; }
  bool sigma_sq_is_estimate() const { return false; }
  const SmoothnessConstants& constants() const { return constants_; }
  const Vector& initial_point() const { return x0_; }
  double f_star_lower() const { return f_star_; }
  bool has_minimizer() const { return has_minimizer_; }
  const Vector& minimizer() const { return x_star_; }
  const Matrix& A(std::size_t i) const { return A_.at(i); }
  const Vector& b(std::size_t i) const { return b_.at(i); }
  const Matrix& mean_A() const { return A_mean_; }
  const Vector& mean_b() const { return b_mean_; }

  double local_value(std::size_t i, const Vector& x) const {
    return 0.5 * x.dot(A_.at(i) * x) + b_[i].dot(x);
  }
  Vector local_gradient(std::size_t i, const Vector& x) const { return A_.at(i) * x + b_[i]; }
  double value(const Vector& x) const { return 0.5 * x.dot(A_mean_ * x) + b_mean_.dot(x); }
  Vector gradient(const Vector& x) const { return A_mean_ * x + b_mean_; }

  Vector stochastic_gradient(std::size_t i, const Vector& x, std::uint64_t sample_seed) const {
    if (i >= A_.size()) throw ConfigurationError("quadratic: unknown worker " + std::to_string(i));
    if (!x.allFinite()) throw NumericDomainError("stochastic gradient requested at a non-finite point");
    Vector g = A_[i] * x + b_[i];
    if (sigma_sq_ > 0.0) {
      Rng rng(sample_seed);
      for (Eigen::Index j = 0; j < g.size(); ++j) g[j] += noise_scale_ * rng.normal();
    }
    return g;
  }

 private:
  QuadraticProblem() = default;

  std::vector<Matrix> A_;
  std::vector<Vector> b_;
  Matrix A_mean_;
  Vector b_mean_;
  Vector x0_;
  Vector x_star_;
  double f_star_ = 0.0;
  bool has_minimizer_ = false;
  double sigma_sq_ = 0.0;
  double noise_scale_ = 0.0;
  SmoothnessConstants constants_;
};

// Random heterogeneous ensemble: A_i = Q_i diag(lambda_i) Q_i^T with
// lambda_ij = s_i * U[0.2, 1], s_i = exp(heterogeneity * U[-1, 1]), and
// b_i ~ N(0, (1 + heterogeneity)^2 I). Every A_i is positive definite, so
// the mean is too and the minimizer is unique.
inline QuadraticProblem make_quadratic(std::size_t d, std::size_t n, double heterogeneity,
                                       double sigma_sq, std::uint64_t seed) {
  if (d < 1 || n < 1) throw ConfigurationError("make_quadratic: need d >= 1 and n >= 1");
  if (!(heterogeneity >= 0.0)) throw ConfigurationError("make_quadratic: heterogeneity must be >= 0");
  const auto dim = static_cast<Eigen::Index>(d);
  Rng rng(seed);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.normal();
    return m;
  };
  std::vector<Matrix> A;
  std::vector<Vector> b;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(dim, dim)).householderQ();
    const double scale = std::exp(heterogeneity * rng.uniform(-1.0, 1.0));
    Vector lambda(dim);
    for (Eigen::Index j = 0; j < dim; ++j) lambda[j] = scale * rng.uniform(0.2, 1.0);
    Matrix a = q * lambda.asDiagonal() * q.transpose();
    A.push_back(0.5 * (a + a.transpose()));
    b.push_back((1.0 + heterogeneity) * gaussian(dim, 1).col(0));
  }
  Vector x0 = gaussian(dim, 1).col(0);
  return QuadraticProblem::from_matrices(std::move(A), std::move(b), std::move(x0), sigma_sq);
}

}  // namespace ringleader
