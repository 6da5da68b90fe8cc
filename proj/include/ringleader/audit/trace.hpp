#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringleader/algorithms/simulate.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader::audit {

// What the audit sees of a run: the update records, the event log, and the
// worker timing. Built from a finished simulation or loaded from disk.
struct RunTrace {
  Algorithm algorithm = Algorithm::Ringleader;
  std::size_t n = 0;
  // Per-worker tau when every worker follows the fixed model.
  std::optional<std::vector<double>> taus;
  std::vector<IterationRecord> records;
  std::vector<EventLogEntry> log;
  bool has_log = false;
  std::uint64_t events_delivered = 0;
  std::array<std::uint64_t, kDispositionCount> disposition_counts{};
  std::string fingerprint;

  bool fixed_model() const noexcept { return taus.has_value(); }

  std::uint64_t count(Disposition d) const { return disposition_counts[static_cast<std::size_t>(d)]; }

  double tau_max() const {
    double m = 0.0;
    for (double t : taus.value()) m = std::max(m, t);
    return m;
  }

  double tau_avg() const {
    double s = 0.0;
    for (double t : taus.value()) s += t;
    return s / static_cast<double>(taus->size());
  }
};

inline RunTrace make_trace(const RunResult& run, std::span<const WorkerProfile> profiles,
                           std::string fingerprint = {}) {
  RunTrace t;
  t.algorithm = run.algorithm;
  t.n = profiles.size();
  bool all_fixed = true;
  std::vector<double> taus;
  for (const auto& p : profiles) {
    if (!p.is_fixed()) {
      all_fixed = false;
      break;
    }
    taus.push_back(p.tau());
  }
  if (all_fixed) t.taus = std::move(taus);
  t.records = run.records;
  t.log = run.events.log;
  t.has_log = !run.events.log.empty() || run.events.events_delivered == 0;
  t.events_delivered = run.events.events_delivered;
  t.disposition_counts = run.events.disposition_counts;
  t.fingerprint = std::move(fingerprint);
  return t;
}

}  // namespace ringleader::audit
