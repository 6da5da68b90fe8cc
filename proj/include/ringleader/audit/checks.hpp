#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ringleader/audit/report.hpp"
#include "ringleader/audit/trace.hpp"

namespace ringleader::audit {

namespace detail {

inline std::string join(std::span<const std::uint64_t> v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ']';
  return os.str();
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// Record shape and bookkeeping: k runs 0..K-1, time never decreases, B^k is
// the harmonic mean of the batch and at least 1, every row has n entries.
inline CheckResult check_records(const RunTrace& trace) {
  CheckResult r;
  r.name = "records";
  double prev = 0.0;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& rec = trace.records[k];
    ++r.visited;
    if (rec.k != k) r.violate(k, "record carries k=" + std::to_string(rec.k));
    if (rec.delays.size() != trace.n || rec.batch.size() != trace.n) {
      r.violate(k, "row does not have one entry per worker");
      continue;
    }
    if (rec.time < prev) r.violate(k, "time went backwards to " + detail::num(rec.time));
    prev = rec.time;
    if (rec.max_delay() > rec.k) r.violate(k, "delay exceeds k");
    const double h = harmonic_batch(rec.batch);
    if (h != rec.B_k) r.violate(k, "B_k=" + detail::num(rec.B_k) + " but batch " + detail::join(rec.batch) +
                                       " gives " + detail::num(h));
    if (!(rec.B_k >= 1.0)) r.violate(k, "B_k=" + detail::num(rec.B_k) + " below 1");
    if (is_ringleader(trace.algorithm)) {
      const std::uint64_t expected = k % trace.n + 1;
      if (rec.updates_this_round != expected) {
        r.violate(k, "update " + std::to_string(rec.updates_this_round) + " of its round, expected " +
                         std::to_string(expected));
      }
    }
  }
  r.detail = std::to_string(trace.records.size()) + " records";
  return r;
}

// Every delay at most 2n-2; at k = cn (c >= 1) the n delays are distinct and
// lie in {0, ..., n-1}.
inline CheckResult check_delay_bound(const RunTrace& trace) {
  if (!is_ringleader(trace.algorithm)) {
    return not_applicable("delay-bound", "trace comes from " + std::string(to_string(trace.algorithm)));
  }
  CheckResult r;
  r.name = "delay-bound";
  const std::uint64_t n = trace.n;
  const std::uint64_t bound = 2 * n - 2;
  std::uint64_t worst = 0;
  std::vector<bool> seen(n);
  for (const auto& rec : trace.records) {
    ++r.visited;
    for (std::size_t i = 0; i < rec.delays.size(); ++i) {
      worst = std::max(worst, rec.delays[i]);
      if (rec.delays[i] > bound) {
        r.violate(rec.k, "worker " + std::to_string(i) + " delay " + std::to_string(rec.delays[i]) + " > " +
                             std::to_string(bound));
      }
    }
    if (rec.k == 0 || rec.k % n != 0) continue;
    std::fill(seen.begin(), seen.end(), false);
    bool ok = rec.delays.size() == n;
    for (auto d : rec.delays) {
      if (d >= n || seen[d]) {
        ok = false;
        break;
      }
      seen[d] = true;
    }
    if (!ok) r.violate(rec.k, "round-start delays " + detail::join(rec.delays) + " not a permutation of 0..n-1");
  }
  r.detail = "max delay " + std::to_string(worst) + " <= " + std::to_string(bound);
  if (r.failed()) r.detail = "max delay " + std::to_string(worst) + ", bound " + std::to_string(bound);
  return r;
}

struct RoundTiming {
  std::vector<VirtualTime> durations;
  double inf_B = std::numeric_limits<double>::infinity();
  double inf_B_first_round = std::numeric_limits<double>::infinity();
};

// Round r spans records [rn, rn+n); it starts where round r-1 ended (or at
// time 0).
inline RoundTiming round_timing(const RunTrace& trace) {
  RoundTiming out;
  const std::size_t n = trace.n;
  const std::size_t rounds = trace.records.size() / n;
  for (std::size_t r = 0; r < rounds; ++r) {
    const VirtualTime start = r == 0 ? 0.0 : trace.records[r * n - 1].time;
    out.durations.push_back(trace.records[r * n + n - 1].time - start);
  }
  for (const auto& rec : trace.records) {
    out.inf_B = std::min(out.inf_B, rec.B_k);
    if (rec.k < n) out.inf_B_first_round = std::min(out.inf_B_first_round, rec.B_k);
  }
  return out;
}

// Under the fixed model: each complete round lasts at most 2 tau_n (plus
// `time_slack` for rounding of non-representable taus) and every
// B^k >= tau_n / (2 tau_avg).
inline CheckResult check_round_timing(const RunTrace& trace, double time_slack = 0.0) {
  if (trace.algorithm != Algorithm::Ringleader) {
    return not_applicable("round-timing", "trace comes from " + std::string(to_string(trace.algorithm)));
  }
  if (!trace.fixed_model()) return not_applicable("round-timing", "universal computation model");
  CheckResult r;
  r.name = "round-timing";
  const double tau_n = trace.tau_max();
  long double tau_sum = 0.0L;
  for (double t : *trace.taus) tau_sum += t;
  const VirtualTime limit = 2.0 * tau_n + time_slack;
  const auto timing = round_timing(trace);
  for (std::size_t i = 0; i < timing.durations.size(); ++i) {
    ++r.visited;
    if (timing.durations[i] > limit) {
      r.violate(i, "round lasted " + detail::num(timing.durations[i]) + " > 2 tau_n = " + detail::num(2 * tau_n));
    }
  }
  // B >= tau_n n / (2 sum tau)  <=>  2 sum tau >= tau_n sum 1/b_i.
  for (const auto& rec : trace.records) {
    long double inv = 0.0L;
    for (auto b : rec.batch) inv += 1.0L / static_cast<long double>(b);
    if (2.0L * tau_sum < static_cast<long double>(tau_n) * inv) {
      r.violate(rec.k, "B_k=" + detail::num(rec.B_k) + " < tau_n/(2 tau_avg) = " +
                           detail::num(tau_n / (2.0 * trace.tau_avg())) + " with batch " + detail::join(rec.batch));
    }
  }
  const double bound = tau_n / (2.0 * trace.tau_avg());
  double longest = 0.0;
  for (auto d : timing.durations) longest = std::max(longest, d);
  r.detail = std::to_string(timing.durations.size()) + " rounds, longest " + detail::num(longest) +
             " (limit " + detail::num(2 * tau_n) + "), inf B " + detail::num(timing.inf_B) + " (bound " +
             detail::num(bound) + ")";
  if (timing.inf_B_first_round > timing.inf_B) r.detail += ", first round inf B " + detail::num(timing.inf_B_first_round);
  return r;
}

// Mean of ||grad f(x^k)||^2 over k = 0..K-1.
inline std::optional<double> running_mean(const RunTrace& trace, std::uint64_t K) {
  if (K == 0 || trace.records.size() < K) return std::nullopt;
  long double s = 0.0L;
  for (std::uint64_t k = 0; k < K; ++k) s += trace.records[k].grad_norm_sq;
  return static_cast<double>(s / static_cast<long double>(K));
}

inline CheckResult check_convergence(const RunTrace& trace, double epsilon, std::uint64_t K) {
  CheckResult r;
  r.name = "convergence";
  const auto mean = running_mean(trace, K);
  if (!mean) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "trace has " + std::to_string(trace.records.size()) + " records, K=" + std::to_string(K);
    return r;
  }
  r.visited = K;
  r.detail = "mean over K=" + std::to_string(K) + " is " + detail::num(*mean) + ", eps " + detail::num(epsilon);
  if (!(*mean <= epsilon)) r.violate(K, "running mean " + detail::num(*mean) + " > " + detail::num(epsilon));
  return r;
}

// Seed-averaged running mean against slack * eps; the median is reported.
inline CheckResult check_convergence_ensemble(std::span<const RunTrace> traces, double epsilon, std::uint64_t K,
                                              double slack = 1.2) {
  CheckResult r;
  r.name = "convergence-ensemble";
  std::vector<double> means;
  for (const auto& t : traces) {
    const auto m = running_mean(t, K);
    if (!m) {
      r.status = CheckStatus::Inconclusive;
      r.detail = "a trace is shorter than K=" + std::to_string(K);
      return r;
    }
    means.push_back(*m);
  }
  if (means.empty()) {
    r.status = CheckStatus::Inconclusive;
    r.detail = "no traces";
    return r;
  }
  r.visited = means.size();
  long double s = 0.0L;
  for (double m : means) s += m;
  const double avg = static_cast<double>(s / static_cast<long double>(means.size()));
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  r.detail = std::to_string(means.size()) + " seeds, mean " + detail::num(avg) + ", median " +
             detail::num(median) + ", limit " + detail::num(slack * epsilon);
  if (!(avg <= slack * epsilon)) r.violate(0, "seed average " + detail::num(avg) + " > " + detail::num(slack * epsilon));
  return r;
}

// Every delivered event lands in exactly one table; Ringleader discards
// nothing, Malenia's discards are reported.
inline CheckResult check_conservation(const RunTrace& trace) {
  CheckResult r;
  r.name = "conservation";
  const auto main = trace.count(Disposition::MainTable);
  const auto plus = trace.count(Disposition::PlusTable);
  const auto discarded = trace.count(Disposition::Discarded);
  std::uint64_t accumulated = 0;
  for (std::size_t d = 0; d < kDispositionCount; ++d)
    if (static_cast<Disposition>(d) != Disposition::Discarded) accumulated += trace.disposition_counts[d];
  r.visited = trace.events_delivered;
  if (accumulated != trace.events_delivered) {
    r.violate(0, std::to_string(accumulated) + " accumulations for " + std::to_string(trace.events_delivered) +
                     " delivered events");
  }
  if (trace.has_log) {
    std::uint64_t delivered = 0, dropped = 0;
    for (const auto& e : trace.log) (e.disposition == Disposition::Discarded ? dropped : delivered) += 1;
    if (delivered != trace.events_delivered) {
      r.violate(0, "log lists " + std::to_string(delivered) + " deliveries, counters say " +
                       std::to_string(trace.events_delivered));
    }
    if (dropped != discarded) r.violate(0, "log lists " + std::to_string(dropped) + " discards");
  }
  if (is_ringleader(trace.algorithm)) {
    if (main + plus != trace.events_delivered) {
      r.violate(0, "main " + std::to_string(main) + " + plus " + std::to_string(plus) + " != " +
                       std::to_string(trace.events_delivered));
    }
    if (discarded != 0) r.violate(0, std::to_string(discarded) + " computations discarded");
    r.detail = "main " + std::to_string(main) + " + plus " + std::to_string(plus) + " = " +
               std::to_string(trace.events_delivered) + " events";
  } else {
    r.detail = std::to_string(trace.events_delivered) + " events, " + std::to_string(discarded) + " discarded";
  }
  return r;
}

// IA^2SGD under the fixed model: some slot gets at least
// sum_i floor(tau_n / tau_i) - n updates stale.
inline CheckResult check_ia2sgd_delay_growth(const RunTrace& trace) {
  if (trace.algorithm != Algorithm::Ia2sgd) {
    return not_applicable("ia2sgd-delay-growth", "trace comes from " + std::string(to_string(trace.algorithm)));
  }
  if (!trace.fixed_model()) return not_applicable("ia2sgd-delay-growth", "universal computation model");
  CheckResult r;
  r.name = "ia2sgd-delay-growth";
  const double tau_n = trace.tau_max();
  std::int64_t target = -static_cast<std::int64_t>(trace.n);
  for (double t : *trace.taus) target += static_cast<std::int64_t>(std::floor(tau_n / t));
  std::uint64_t worst = 0;
  for (const auto& rec : trace.records) {
    ++r.visited;
    worst = std::max(worst, rec.max_delay());
  }
  r.detail = "max slot delay " + std::to_string(worst) + ", expected at least " + std::to_string(target);
  const VirtualTime span = trace.records.empty() ? 0.0 : trace.records.back().time;
  if (span < 3.0 * tau_n) {
    r.status = CheckStatus::Inconclusive;
    r.detail += "; trace covers less than 3 tau_n";
    return r;
  }
  if (static_cast<std::int64_t>(worst) < target) r.violate(0, r.detail);
  return r;
}

// The checks that need nothing but the trace.
inline AuditReport audit_trace(const RunTrace& trace, double time_slack = 0.0) {
  AuditReport report;
  report.add(check_records(trace));
  report.add(check_conservation(trace));
  report.add(check_delay_bound(trace));
  report.add(check_round_timing(trace, time_slack));
  report.add(check_ia2sgd_delay_growth(trace));
  return report;
}

}  // namespace ringleader::audit
