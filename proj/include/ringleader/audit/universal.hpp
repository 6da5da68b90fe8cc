#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ringleader/audit/checks.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader::audit {

// Two workers trading speeds: while the slow one (power 1/base_tau) finishes
// one gradient, the fast one (power s/base_tau) finishes s; then they swap.
// Worker 0 starts fast. `periods` full swaps (2 base_tau each) are spelled
// out, after which the pattern freezes in its next phase.
inline std::vector<WorkerProfile> adversarial_roleswitch_profiles(std::uint64_t s, double base_tau,
                                                                  std::size_t periods) {
  if (s < 1) throw ConfigurationError("role switch needs s >= 1");
  if (!(base_tau > 0.0)) throw ConfigurationError("role switch needs base_tau > 0");
  if (periods == 0) throw ConfigurationError("role switch needs at least one period");
  const double fast = static_cast<double>(s) / base_tau;
  const double slow = 1.0 / base_tau;
  std::vector<PowerSegment> a, b;
  for (std::size_t m = 0; m <= 2 * periods; ++m) {
    const double start = static_cast<double>(m) * base_tau;
    const bool even = m % 2 == 0;
    a.push_back({start, even ? fast : slow});
    b.push_back({start, even ? slow : fast});
  }
  return {WorkerProfile::universal(0, std::move(a)), WorkerProfile::universal(1, std::move(b))};
}

namespace detail {

// Power at time t for a profile (fixed profiles are constant 1/tau).
struct PowerWalk {
  std::vector<PowerSegment> segments;

  explicit PowerWalk(const WorkerProfile& p) {
    if (p.is_fixed()) {
      segments.push_back({0.0, 1.0 / p.tau()});
    } else {
      segments = std::get<UniversalModel>(p.model).segments;
    }
  }

  // Smallest T >= from with integral_from^T p = units, walking segments
  // left to right; kNever when the tail power is zero.
  VirtualTime reach(VirtualTime from, double units) const {
    double left = units;
    for (std::size_t j = 0; j < segments.size(); ++j) {
      const VirtualTime lo = std::max(from, segments[j].start);
      const VirtualTime hi = j + 1 < segments.size() ? segments[j + 1].start : kNever;
      if (hi <= lo) continue;
      const double p = segments[j].power;
      if (p <= 0.0) continue;
      if (hi == kNever || (hi - lo) * p >= left) return lo + left / p;
      left -= (hi - lo) * p;
    }
    return kNever;
  }
};

}  // namespace detail

// Times T^0 = 0, T^1, ..., T^K where T^k is the first T at which the counts
// floor(integral_{T^{k-1}}^T p_i) have harmonic mean >= threshold. Entries
// after an unreachable one are kNever.
inline std::vector<VirtualTime> t_sequence(std::span<const WorkerProfile> profiles, double threshold,
                                           std::size_t K) {
  if (profiles.empty()) throw ConfigurationError("t_sequence needs at least one worker");
  if (!(threshold >= 1.0)) throw ConfigurationError("t_sequence threshold must be >= 1");
  const std::size_t n = profiles.size();
  std::vector<detail::PowerWalk> walks;
  for (const auto& p : profiles) walks.emplace_back(p);
  std::vector<VirtualTime> T{0.0};
  T.reserve(K + 1);
  std::vector<std::uint64_t> count(n);
  std::vector<VirtualTime> next(n);
  for (std::size_t k = 1; k <= K; ++k) {
    const VirtualTime from = T.back();
    if (from == kNever) {
      T.push_back(kNever);
      continue;
    }
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) next[i] = walks[i].reach(from, 1.0);
    VirtualTime reached = kNever;
    while (true) {
      const VirtualTime t = *std::min_element(next.begin(), next.end());
      if (t == kNever) break;
      // Every worker whose count steps at t steps together.
      for (std::size_t i = 0; i < n; ++i) {
        if (next[i] != t) continue;
        ++count[i];
        next[i] = walks[i].reach(from, static_cast<double>(count[i] + 1));
      }
      long double inv = 0.0L;
      bool all = true;
      for (auto c : count) {
        if (c == 0) {
          all = false;
          break;
        }
        inv += 1.0L / static_cast<long double>(c);
      }
      if (all && static_cast<long double>(n) / inv >= static_cast<long double>(threshold) * (1.0L - 1e-12L)) {
        reached = t;
        break;
      }
      // Workers whose power has run out cap the harmonic mean for good.
      long double stuck = 0.0L;
      bool starved = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (next[i] != kNever) continue;
        if (count[i] == 0) starved = true;
        stuck += 1.0L / static_cast<long double>(std::max<std::uint64_t>(count[i], 1));
      }
      if (starved || (stuck > 0.0L && static_cast<long double>(n) / stuck <
                                          static_cast<long double>(threshold) * (1.0L - 1e-12L))) {
        break;
      }
    }
    T.push_back(reached);
  }
  return T;
}

inline std::vector<VirtualTime> t_sequence(std::span<const WorkerProfile> profiles, double sigma_sq,
                                           double epsilon, std::size_t K) {
  const double n = static_cast<double>(profiles.size());
  const double threshold = sigma_sq > 0.0 ? std::max(1.0, sigma_sq / (n * epsilon)) : 1.0;
  return t_sequence(profiles, threshold, K);
}

// Time of the K-th update against T^{ceil(2K/n)} at every completed round
// (K = cn), and against T^{2 ceil(K/n)} at every K. `T` must reach index
// 2 ceil(records / n).
inline CheckResult check_t_sequence_bound(const RunTrace& trace, std::span<const VirtualTime> T) {
  CheckResult r;
  r.name = "t-sequence-bound";
  if (trace.algorithm != Algorithm::RingleaderUniversal && trace.algorithm != Algorithm::Ringleader) {
    return not_applicable(r.name, "trace comes from " + std::string(to_string(trace.algorithm)));
  }
  const std::size_t n = trace.n;
  std::uint64_t unaligned_over = 0;
  for (std::size_t K = 1; K <= trace.records.size(); ++K) {
    const VirtualTime t = trace.records[K - 1].time;
    const std::size_t rounds = (K + n - 1) / n;
    if (2 * rounds >= T.size()) {
      r.status = CheckStatus::Inconclusive;
      r.detail = "T sequence too short for K=" + std::to_string(K);
      return r;
    }
    ++r.visited;
    if (t > T[2 * rounds]) {
      r.violate(K, "update " + std::to_string(K) + " at " + detail::num(t) + " > T^" + std::to_string(2 * rounds) +
                       " = " + detail::num(T[2 * rounds]));
    }
    const std::size_t idx = (2 * K + n - 1) / n;
    if (K % n != 0) {
      if (t > T[idx]) ++unaligned_over;
    }
  }
  r.detail = std::to_string(r.visited) + " updates within T^{2 ceil(K/n)}";
  if (unaligned_over > 0) {
    r.detail += "; " + std::to_string(unaligned_over) + " mid-round updates later than T^{ceil(2K/n)}";
  }
  return r;
}

}  // namespace ringleader::audit
