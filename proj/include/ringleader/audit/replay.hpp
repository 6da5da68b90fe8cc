#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ringleader/audit/checks.hpp"
#include "ringleader/problems/problem.hpp"
#include "ringleader/rng.hpp"

namespace ringleader::audit {

namespace detail {

// The audit's own copy of the server tables, driven only by the event log's
// dispositions and the record boundaries.
struct ShadowTable {
  std::vector<Vector> G;
  std::vector<std::uint64_t> b;
  std::vector<IterationStamp> stamp;

  ShadowTable(std::size_t n, Eigen::Index d) : G(n, Vector::Zero(d)), b(n, 0), stamp(n, 0) {}

  void clear() {
    for (auto& g : G) g.setZero();
    std::fill(b.begin(), b.end(), 0);
  }

  Vector direction() const {
    Vector out = Vector::Zero(G.front().size());
    for (std::size_t i = 0; i < G.size(); ++i) out += G[i] / static_cast<double>(b[i]);
    return out / static_cast<double>(G.size());
  }
};

inline double relative_error(const Vector& got, const Vector& want) {
  const double scale = std::max(want.norm(), std::numeric_limits<double>::min());
  return (got - want).norm() / scale;
}

}  // namespace detail

// Recomputes every gradient from its logged seed at the logged iterate,
// rebuilds the tables from the dispositions alone, and compares each update
// direction, batch, and delay vector with the record. Needs a run kept with
// log, directions and iterates.
template <Problem P>
CheckResult check_shadow_replay(const P& problem, const RunResult& run, double rel_tol = 1e-12) {
  CheckResult r;
  r.name = "shadow-replay";
  if (run.events.log.empty() && run.events.events_delivered > 0) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "run was recorded without an event log";
    return r;
  }
  if (run.iterates.size() != run.records.size() + 1) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "run was recorded without iterates";
    return r;
  }
  const std::size_t n = problem.workers();
  const Eigen::Index d = static_cast<Eigen::Index>(problem.dimension());
  detail::ShadowTable main(n, d), plus(n, d);
  const Algorithm a = run.algorithm;
  std::uint64_t delivered = 0;
  std::size_t next_record = 0;
  double worst = 0.0;
  for (const auto& e : run.events.log) {
    if (e.disposition == Disposition::Discarded) continue;
    const std::uint64_t index = delivered++;
    if (e.iterate_index >= run.iterates.size()) {
      r.violate(index, "event stamped with unknown iterate " + std::to_string(e.iterate_index));
      return r;
    }
    const Vector g = problem.stochastic_gradient(e.worker_id, run.iterates[e.iterate_index], e.sample_seed);
    auto& table = e.disposition == Disposition::PlusTable ? plus : main;
    const WorkerId w = e.worker_id;
    if (e.disposition == Disposition::Ia2sgdSlot) {
      table.G[w] = g;
      table.b[w] = 1;
    } else {
      if (table.b[w] > 0 && table.stamp[w] != e.iterate_index) {
        r.violate(index, "worker " + std::to_string(w) + " mixes iterates in one table entry");
      }
      table.G[w] = table.b[w] == 0 ? g : Vector(table.G[w] + g);
      ++table.b[w];
    }
    table.stamp[w] = e.iterate_index;

    if (next_record >= run.records.size() || run.records[next_record].event_index != index) continue;
    const auto& rec = run.records[next_record];
    ++r.visited;
    if (rec.batch != main.b) {
      r.violate(rec.k, "batch " + detail::join(rec.batch) + " but shadow table has " + detail::join(main.b));
    } else if (!rec.direction) {
      r.status = CheckStatus::Inconclusive;
      r.detail = "run was recorded without directions";
      return r;
    } else {
      const double err = detail::relative_error(*rec.direction, main.direction());
      worst = std::max(worst, err);
      if (!(err <= rel_tol)) r.violate(rec.k, "direction differs by " + detail::num(err));
      for (std::size_t i = 0; i < n; ++i) {
        if (rec.delays[i] != rec.k - main.stamp[i]) {
          r.violate(rec.k, "worker " + std::to_string(i) + " delay " + std::to_string(rec.delays[i]) +
                               ", shadow stamp gives " + std::to_string(rec.k - main.stamp[i]));
        }
      }
    }
    ++next_record;
    if (is_ringleader(a)) {
      if (rec.updates_this_round == n) {
        std::swap(main, plus);
        plus.clear();
      }
    } else if (a != Algorithm::Ia2sgd) {
      main.clear();
    }
  }
  if (next_record != run.records.size()) {
    r.violate(next_record, std::to_string(run.records.size() - next_record) + " records have no triggering event");
  }
  r.detail = std::to_string(r.visited) + " directions rebuilt, worst relative error " + detail::num(worst);
  return r;
}

struct VarianceSample {
  std::uint64_t k = 0;
  double empirical = 0.0;
  double bound = 0.0;  // sigma^2 / (B^k n)
};

struct VarianceReport {
  std::vector<VarianceSample> samples;
  CheckResult result;
};

// Monte-Carlo check of E||g - (1/n) sum grad f_i(x^{k - delta_i})||^2 <=
// sigma^2 / (B^k n). At each sampled record the estimator is rebuilt `draws`
// times with fresh noise at the recorded stale iterates and the recorded b_i.
template <Problem P>
VarianceReport check_variance_surrogate(const P& problem, const RunResult& run, std::size_t samples,
                                        std::size_t draws = 10000, double slack = 1.1,
                                        std::uint64_t seed = 0x5eedULL) {
  VarianceReport out;
  auto& r = out.result;
  r.name = "variance-surrogate";
  if (run.iterates.size() != run.records.size() + 1) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "run was recorded without iterates";
    return out;
  }
  if (run.records.empty() || samples == 0) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "nothing to sample";
    return out;
  }
  const std::size_t n = problem.workers();
  const double sigma_sq = problem.sigma_sq();
  const std::size_t K = run.records.size();
  const std::size_t count = std::min(samples, K);
  for (std::size_t s = 0; s < count; ++s) {
    // Evenly spread over the run, always including the last record.
    const std::size_t idx = count == 1 ? K - 1 : s * (K - 1) / (count - 1);
    const auto& rec = run.records[idx];
    std::vector<const Vector*> stale(n);
    Vector mean_grad = Vector::Zero(static_cast<Eigen::Index>(problem.dimension()));
    for (std::size_t i = 0; i < n; ++i) {
      stale[i] = &run.iterates[rec.k - rec.delays[i]];
      mean_grad += problem.local_gradient(i, *stale[i]);
    }
    mean_grad /= static_cast<double>(n);
    long double acc = 0.0L;
    for (std::size_t t = 0; t < draws; ++t) {
      Vector est = Vector::Zero(mean_grad.size());
      for (std::size_t i = 0; i < n; ++i) {
        Vector gi = Vector::Zero(mean_grad.size());
        for (std::uint64_t j = 0; j < rec.batch[i]; ++j) {
          const auto key = stream_key(seed, (idx << 20) ^ i, t * 0x10000ULL + j);
          gi += problem.stochastic_gradient(i, *stale[i], key);
        }
        est += gi / static_cast<double>(rec.batch[i]);
      }
      est /= static_cast<double>(n);
      acc += (est - mean_grad).squaredNorm();
    }
    VarianceSample vs;
    vs.k = rec.k;
    vs.empirical = static_cast<double>(acc / static_cast<long double>(draws));
    vs.bound = sigma_sq / (rec.B_k * static_cast<double>(n));
    ++r.visited;
    if (!(vs.empirical <= slack * vs.bound)) {
      r.violate(vs.k, "second moment " + detail::num(vs.empirical) + " > " + detail::num(slack) + " x " +
                          detail::num(vs.bound));
    }
    out.samples.push_back(vs);
  }
  double worst = 0.0;
  for (const auto& s : out.samples)
    if (s.bound > 0.0) worst = std::max(worst, s.empirical / s.bound);
  r.detail = std::to_string(out.samples.size()) + " samples x " + std::to_string(draws) +
             " draws, worst ratio to bound " + detail::num(worst);
  return out;
}

}  // namespace ringleader::audit
