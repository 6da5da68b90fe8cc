#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/problems/partition.hpp"
#include "ringleader/problems/problem.hpp"
#include "ringleader/rng.hpp"

namespace ringleader {

// Linear softmax classifier with mean cross-entropy on a Gaussian-mixture
// dataset split across clients by an equal-size Dirichlet partition.
// Parameters are the column-major flattening of W (classes x (features+1));
// the last feature column is a constant 1 (bias).
class SoftmaxProblem {
 public:
  static constexpr std::size_t kMinibatch = 4;

  std::size_t dimension() const { return classes_ * features_; }
  std::size_t workers() const { return shards_.size(); }
  std::size_t classes() const { return classes_; }
  double sigma_sq() const { return sigma_sq_; }
  bool sigma_sq_is_estimate() const { return true; }
  const SmoothnessConstants& constants() const { return constants_; }
  const Vector& initial_point() const { return x0_; }
  double f_star_lower() const { return 0.0; }
  const DirichletPartition& partition() const { return partition_; }

  double local_value(std::size_t i, const Vector& x) const {
    const auto& shard = shard_at(i);
    const Matrix logits = weights(x) * shard.features.transpose();
    double total = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const double mx = logits.col(j).maxCoeff();
      const double lse = mx + std::log((logits.col(j).array() - mx).exp().sum());
      total += lse - logits(shard.labels[j], j);
    }
    return total / static_cast<double>(logits.cols());
  }

  Vector local_gradient(std::size_t i, const Vector& x) const {
    const auto& shard = shard_at(i);
    return batch_gradient(x, shard.features, shard.labels);
  }

  double value(const Vector& x) const {
    double total = 0.0;
    for (std::size_t i = 0; i < shards_.size(); ++i) total += local_value(i, x);
    return total / static_cast<double>(shards_.size());
  }

  Vector gradient(const Vector& x) const {
    Vector total = Vector::Zero(x.size());
    for (std::size_t i = 0; i < shards_.size(); ++i) total += local_gradient(i, x);
    return total / static_cast<double>(shards_.size());
  }

  Vector stochastic_gradient(std::size_t i, const Vector& x, std::uint64_t sample_seed) const {
    if (!x.allFinite()) throw NumericDomainError("stochastic gradient requested at a non-finite point");
    const auto& shard = shard_at(i);
    Rng rng(sample_seed);
    Matrix batch(kMinibatch, features_);
    std::vector<std::size_t> labels(kMinibatch);
    for (std::size_t j = 0; j < kMinibatch; ++j) {
      const auto pick = static_cast<Eigen::Index>(rng.below(shard.labels.size()));
      batch.row(static_cast<Eigen::Index>(j)) = shard.features.row(pick);
      labels[j] = shard.labels[static_cast<std::size_t>(pick)];
    }
    return batch_gradient(x, batch, labels);
  }

  friend SoftmaxProblem make_softmax_classification(std::size_t, std::size_t, std::size_t, double,
                                                    std::size_t, std::uint64_t);

 private:
  struct Shard {
    Matrix features;  // m x (d+1)
    std::vector<std::size_t> labels;
  };

  const Shard& shard_at(std::size_t i) const {
    if (i >= shards_.size()) throw ConfigurationError("softmax: unknown worker " + std::to_string(i));
    return shards_[i];
  }

  Eigen::Map<const Matrix> weights(const Vector& x) const {
    return {x.data(), static_cast<Eigen::Index>(classes_), static_cast<Eigen::Index>(features_)};
  }

  Vector batch_gradient(const Vector& x, const Matrix& features, const std::vector<std::size_t>& labels) const {
    Matrix probs = weights(x) * features.transpose();  // classes x m
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      const double mx = probs.col(j).maxCoeff();
      probs.col(j) = (probs.col(j).array() - mx).exp();
      probs.col(j) /= probs.col(j).sum();
      probs(labels[static_cast<std::size_t>(j)], j) -= 1.0;
    }
    const Matrix grad = probs * features / static_cast<double>(features.rows());
    return Eigen::Map<const Vector>(grad.data(), grad.size());
  }

  std::size_t classes_ = 0;
  std::size_t features_ = 0;
  std::vector<Shard> shards_;
  DirichletPartition partition_;
  Vector x0_;
  double sigma_sq_ = 0.0;
  SmoothnessConstants constants_;
};

// The cross-entropy Hessian is sum_j (diag(p_j) - p_j p_j^T) (x) a_j a_j^T / m
// with the first factor <= I/2, so 0.5 * lambda_max(A^T A / m) bounds L.
inline SoftmaxProblem make_softmax_classification(std::size_t d, std::size_t classes, std::size_t n,
                                                  double alpha, std::size_t samples_per_client,
                                                  std::uint64_t seed) {
  if (d < 1 || classes < 2 || n < 1 || samples_per_client < 1) {
    throw ConfigurationError("softmax: need d >= 1, classes >= 2, n >= 1, samples_per_client >= 1");
  }
  Rng rng(seed);
  const auto dim = static_cast<Eigen::Index>(d);
  Matrix means(static_cast<Eigen::Index>(classes), dim);
  for (std::size_t c = 0; c < classes; ++c) {
    Vector v(dim);
    for (auto& e : v) e = rng.normal();
    means.row(static_cast<Eigen::Index>(c)) = 3.0 * v.normalized();
  }
  // Raw pool is deliberately not a multiple of n; the partition trims it.
  const std::size_t raw = n * samples_per_client + (n - 1);
  Matrix features(static_cast<Eigen::Index>(raw), dim + 1);
  std::vector<std::size_t> labels(raw);
  for (std::size_t j = 0; j < raw; ++j) {
    labels[j] = rng.below(classes);
    const auto row = static_cast<Eigen::Index>(j);
    for (Eigen::Index k = 0; k < dim; ++k) {
      features(row, k) = means(static_cast<Eigen::Index>(labels[j]), k) + rng.normal();
    }
    features(row, dim) = 1.0;
  }

  SoftmaxProblem p;
  p.classes_ = classes;
  p.features_ = d + 1;
  p.partition_ = dirichlet_partition(labels, classes, n, alpha, splitmix64(seed ^ 0x5EEDULL));
  std::vector<double> per_worker;
  Matrix global_moment = Matrix::Zero(dim + 1, dim + 1);
  for (std::size_t i = 0; i < n; ++i) {
    SoftmaxProblem::Shard shard;
    const auto& idx = p.partition_.samples[i];
    shard.features.resize(static_cast<Eigen::Index>(idx.size()), dim + 1);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      shard.features.row(static_cast<Eigen::Index>(j)) = features.row(static_cast<Eigen::Index>(idx[j]));
      shard.labels.push_back(labels[idx[j]]);
    }
    const Matrix moment = shard.features.transpose() * shard.features / static_cast<double>(idx.size());
    per_worker.push_back(0.5 * spectral_radius_symmetric(moment));
    global_moment += moment;
    p.shards_.push_back(std::move(shard));
  }
  global_moment /= static_cast<double>(n);
  p.constants_ = SmoothnessConstants::from_per_worker(
      std::move(per_worker), 0.5 * spectral_radius_symmetric(global_moment), /*exact=*/false);
  p.x0_ = Vector::Zero(static_cast<Eigen::Index>(p.dimension()));

  // sigma^2 estimate: 95th percentile of per-(probe, worker) sample variances.
  constexpr int kProbes = 8;
  constexpr int kDraws = 64;
  std::vector<double> variances;
  Rng probe_rng(splitmix64(seed ^ 0xFACEULL));
  for (int probe = 0; probe < kProbes; ++probe) {
    Vector x = Vector::Zero(p.x0_.size());
    if (probe > 0)
      for (auto& e : x) e = 0.5 * probe_rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      const Vector g = p.local_gradient(i, x);
      double acc = 0.0;
      for (int k = 0; k < kDraws; ++k) {
        acc += (p.stochastic_gradient(i, x, stream_key(seed, i, probe * kDraws + k)) - g).squaredNorm();
      }
      variances.push_back(acc / kDraws);
    }
  }
  std::sort(variances.begin(), variances.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(variances.size())));
  p.sigma_sq_ = variances[std::max<std::size_t>(rank, 1) - 1];
  return p;
}

}  // namespace ringleader
