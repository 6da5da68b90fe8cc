#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ringleader/algorithms/records.hpp"
#include "ringleader/errors.hpp"
#include "ringleader/problems/problem.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader {

struct ServerOptions {
  double gamma = 0.0;
  bool keep_directions = false;
  bool keep_iterates = false;  // x^0, x^1, ... (needed for stale-iterate audits)
};

// Per-worker accumulators (G_i, b_i) plus the iterate stamp all of G_i's
// gradients were computed at.
struct GradientTable {
  std::vector<Vector> G;
  std::vector<std::uint64_t> b;
  std::vector<IterationStamp> stamp;

  GradientTable(std::size_t n, Eigen::Index d) : G(n, Vector::Zero(d)), b(n, 0), stamp(n, 0) {}

  void add(WorkerId w, const Vector& g, IterationStamp s) {
    if (b[w] == 0) {
      G[w] = g;
      stamp[w] = s;
    } else {
      if (stamp[w] != s) throw InvariantViolation("table entry would mix gradients from two iterates");
      G[w] += g;
    }
    ++b[w];
  }

  void clear() {
    for (auto& g : G) g.setZero();
    std::fill(b.begin(), b.end(), 0);
    std::fill(stamp.begin(), stamp.end(), 0);
  }
};

// Iterate, counter, records and the assignment ledger shared by every
// server. Gradients are evaluated at the copy of the model each worker holds.
template <Problem P>
class ServerCore {
 public:
  ServerCore(const P& problem, ServerOptions options)
      : problem_(problem),
        options_(options),
        x_(problem.initial_point()),
        assigned_(problem.workers(), 0),
        held_(problem.workers(), problem.initial_point()) {
    if (!(options.gamma > 0.0) || !std::isfinite(options.gamma)) {
      throw ConfigurationError("stepsize must be a positive finite number");
    }
    grad_norm_sq_ = problem.gradient(x_).squaredNorm();
    if (options_.keep_iterates) iterates_.push_back(x_);
  }

  std::uint64_t iterations() const noexcept { return k_; }
  const Vector& x() const noexcept { return x_; }
  double current_grad_norm_sq() const noexcept { return grad_norm_sq_; }
  bool diverged() const noexcept { return diverged_; }
  double gamma() const noexcept { return options_.gamma; }
  const std::vector<IterationRecord>& records() const noexcept { return records_; }
  std::vector<IterationRecord> take_records() { return std::move(records_); }
  std::vector<Vector> take_iterates() { return std::move(iterates_); }

 protected:
  std::size_t n() const noexcept { return assigned_.size(); }
  Eigen::Index dim() const noexcept { return x_.size(); }
  const P& problem() const noexcept { return problem_; }

  Vector receive(const GradientEvent& e) {
    if (e.worker_id >= n()) throw ProtocolError("event from unknown worker " + std::to_string(e.worker_id));
    if (e.iterate_index != assigned_[e.worker_id]) {
      throw ProtocolError("worker " + std::to_string(e.worker_id) + " sent a gradient at iterate " +
                          std::to_string(e.iterate_index) + " but holds " +
                          std::to_string(assigned_[e.worker_id]));
    }
    return problem_.stochastic_gradient(e.worker_id, held_[e.worker_id], e.sample_seed);
  }

  IterationRecord& apply_update(const GradientEvent& e, const WorkerPool& pool, std::span<const Vector> G,
                                std::span<const std::uint64_t> b, std::span<const IterationStamp> stamps,
                                std::uint64_t updates_this_round) {
    IterationRecord rec;
    rec.k = k_;
    rec.time = e.time;
    rec.delays.resize(n());
    for (std::size_t i = 0; i < n(); ++i) {
      if (stamps[i] > k_) throw InvariantViolation("table entry stamped in the future");
      rec.delays[i] = k_ - stamps[i];
    }
    rec.batch.assign(b.begin(), b.end());
    rec.B_k = harmonic_batch(b);
    rec.grad_norm_sq = grad_norm_sq_;
    rec.updates_this_round = updates_this_round;
    rec.event_index = pool.events_delivered() - 1;

    Vector direction = averaged_direction(G, b);
    x_ -= options_.gamma * direction;
    ++k_;
    if (options_.keep_directions) rec.direction = std::move(direction);
    if (x_.allFinite()) {
      grad_norm_sq_ = problem_.gradient(x_).squaredNorm();
      if (!std::isfinite(grad_norm_sq_)) diverged_ = true;
    } else {
      grad_norm_sq_ = std::numeric_limits<double>::infinity();
      diverged_ = true;
    }
    if (options_.keep_iterates) iterates_.push_back(x_);
    records_.push_back(std::move(rec));
    return records_.back();
  }

  void assign(WorkerPool& pool, WorkerId w) {
    pool.reassign(w, k_);
    assigned_[w] = k_;
    held_[w] = x_;
  }

  std::uint64_t assign_all(WorkerPool& pool) {
    const auto discarded = pool.broadcast(k_);
    for (WorkerId w = 0; w < n(); ++w) {
      assigned_[w] = k_;
      held_[w] = x_;
    }
    return discarded;
  }

 private:
  const P& problem_;
  ServerOptions options_;
  Vector x_;
  std::uint64_t k_ = 0;
  double grad_norm_sq_ = 0.0;
  bool diverged_ = false;
  std::vector<IterationStamp> assigned_;
  std::vector<Vector> held_;
  std::vector<IterationRecord> records_;
  std::vector<Vector> iterates_;
};

}  // namespace ringleader
