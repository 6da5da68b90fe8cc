#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/problems/problem.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader {

// One server update x^k -> x^{k+1}.
struct IterationRecord {
  std::uint64_t k = 0;
  VirtualTime time = 0.0;
  std::vector<std::uint64_t> delays;  // delta_i^k
  std::vector<std::uint64_t> batch;   // b_i^k
  double B_k = 0.0;
  double grad_norm_sq = 0.0;  // ||grad f(x^k)||^2, before the update
  std::uint64_t updates_this_round = 0;
  std::uint64_t discarded = 0;  // computations aborted by this update's broadcast
  std::uint64_t event_index = 0;  // 0-based index of the triggering delivery
  std::optional<Vector> direction;

  std::uint64_t max_delay() const {
    return delays.empty() ? 0 : *std::max_element(delays.begin(), delays.end());
  }
};

// ((1/n) sum 1/b_i)^{-1}; zero when some b_i is zero.
inline double harmonic_batch(std::span<const std::uint64_t> b) {
  if (b.empty()) return 0.0;
  long double inv = 0.0L;
  for (auto v : b) {
    if (v == 0) return 0.0;
    inv += 1.0L / static_cast<long double>(v);
  }
  return static_cast<double>(static_cast<long double>(b.size()) / inv);
}

// (1/n) sum_i G_i / b_i. Every method forms its update direction here, so
// reductions across methods (n = 1) agree bit for bit.
inline Vector averaged_direction(std::span<const Vector> G, std::span<const std::uint64_t> b) {
  if (G.empty() || G.size() != b.size()) throw InvariantViolation("direction: table shape mismatch");
  Vector out = Vector::Zero(G.front().size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (b[i] == 0) throw InvariantViolation("update attempted with an empty table entry");
    out += G[i] / static_cast<double>(b[i]);
  }
  return out / static_cast<double>(G.size());
}

}  // namespace ringleader
