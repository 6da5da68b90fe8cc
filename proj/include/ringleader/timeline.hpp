#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/rng.hpp"

namespace ringleader {

using VirtualTime = double;
using WorkerId = std::size_t;
using IterationStamp = std::uint64_t;

inline constexpr VirtualTime kNever = std::numeric_limits<VirtualTime>::infinity();

// Accumulated work within this relative distance below an integer is
// counted as that integer (absorbs the rounding of t0 + units / power).
inline constexpr double kWorkSnap = 1e-9;

struct PowerSegment {
  VirtualTime start = 0.0;
  double power = 0.0;
};

// Worker i needs exactly tau seconds per stochastic gradient.
struct FixedModel {
  double tau = 1.0;
};

// Piecewise-constant compute power. Segment j covers [start_j, start_{j+1});
// the last one is open-ended. Power is zero before the first breakpoint.
struct UniversalModel {
  std::vector<PowerSegment> segments;
};

struct WorkerProfile {
  WorkerId worker_id = 0;
  std::variant<FixedModel, UniversalModel> model;

  static WorkerProfile fixed(WorkerId id, double tau);
  static WorkerProfile universal(WorkerId id, std::vector<PowerSegment> segments);

  bool is_fixed() const noexcept { return std::holds_alternative<FixedModel>(model); }
  double tau() const;
};

inline void validate_profile(const WorkerProfile& profile) {
  if (const auto* fixed = std::get_if<FixedModel>(&profile.model)) {
    if (!(fixed->tau > 0.0) || !std::isfinite(fixed->tau)) {
      throw ConfigurationError("worker " + std::to_string(profile.worker_id) +
                               ": tau must be a positive finite number");
    }
    return;
  }
  const auto& segments = std::get<UniversalModel>(profile.model).segments;
  if (segments.empty()) {
    throw ConfigurationError("worker " + std::to_string(profile.worker_id) +
                             ": power profile has no segments");
  }
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const auto& seg = segments[j];
    if (!std::isfinite(seg.start) || seg.start < 0.0) {
      throw ConfigurationError("worker " + std::to_string(profile.worker_id) +
                               ": breakpoints must be finite and non-negative");
    }
    if (!std::isfinite(seg.power) || seg.power < 0.0) {
      throw ConfigurationError("worker " + std::to_string(profile.worker_id) +
                               ": power values must be finite and non-negative");
    }
    if (j > 0 && !(seg.start > segments[j - 1].start)) {
      throw ConfigurationError("worker " + std::to_string(profile.worker_id) +
                               ": breakpoints must be strictly increasing");
    }
  }
}

inline WorkerProfile WorkerProfile::fixed(WorkerId id, double tau) {
  WorkerProfile p{id, FixedModel{tau}};
  validate_profile(p);
  return p;
}

inline WorkerProfile WorkerProfile::universal(WorkerId id, std::vector<PowerSegment> segments) {
  WorkerProfile p{id, UniversalModel{std::move(segments)}};
  validate_profile(p);
  return p;
}

inline double WorkerProfile::tau() const {
  if (const auto* fixed = std::get_if<FixedModel>(&model)) return fixed->tau;
  throw ConfigurationError("worker " + std::to_string(worker_id) +
                           " follows the universal model and has no fixed tau");
}

namespace detail {

// Index of the segment containing t, or size() when t precedes the first
// breakpoint.
inline std::size_t segment_at(std::span<const PowerSegment> segments, VirtualTime t) {
  const auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                   [](VirtualTime v, const PowerSegment& s) { return v < s.start; });
  if (it == segments.begin()) return segments.size();
  return static_cast<std::size_t>(it - segments.begin()) - 1;
}

inline VirtualTime segment_end(std::span<const PowerSegment> segments, std::size_t j) {
  return j + 1 < segments.size() ? segments[j + 1].start : kNever;
}

inline double integrate(std::span<const PowerSegment> segments, VirtualTime t1, VirtualTime t2) {
  if (!(t2 > t1)) return 0.0;
  std::size_t j = segment_at(segments, t1);
  VirtualTime cursor = t1;
  if (j == segments.size()) {
    j = 0;
    cursor = segments.front().start;
    if (cursor >= t2) return 0.0;
  }
  double total = 0.0;
  for (; j < segments.size() && cursor < t2; ++j) {
    const VirtualTime hi = std::min(t2, segment_end(segments, j));
    if (segments[j].power > 0.0) total += (hi - cursor) * segments[j].power;
    cursor = hi;
  }
  return total;
}

// Earliest t >= from with integral(from, t) == units, or kNever.
inline VirtualTime time_to_accumulate(std::span<const PowerSegment> segments, VirtualTime from,
                                      double units) {
  std::size_t j = segment_at(segments, from);
  VirtualTime cursor = from;
  if (j == segments.size()) {
    j = 0;
    cursor = segments.front().start;
  }
  double remaining = units;
  for (; j < segments.size(); ++j) {
    const VirtualTime end = segment_end(segments, j);
    const double power = segments[j].power;
    if (power > 0.0) {
      const double available = (end - cursor) * power;
      if (available >= remaining) return cursor + remaining / power;
      remaining -= available;
    }
    cursor = end;
  }
  return kNever;
}

}  // namespace detail

// Integral of the worker's compute power over [t1, t2].
inline double accumulated_work(const WorkerProfile& profile, VirtualTime t1, VirtualTime t2) {
  if (const auto* fixed = std::get_if<FixedModel>(&profile.model)) {
    return t2 > t1 ? (t2 - t1) / fixed->tau : 0.0;
  }
  return detail::integrate(std::get<UniversalModel>(profile.model).segments, t1, t2);
}

inline std::uint64_t snap_floor(double work) {
  return static_cast<std::uint64_t>(std::floor(work + kWorkSnap * std::max(1.0, work)));
}

// Number of stochastic gradients the worker completes on [t1, t2].
inline std::uint64_t completion_count(const WorkerProfile& profile, VirtualTime t1, VirtualTime t2) {
  if (t2 < t1) throw ConfigurationError("completion_count: interval end precedes its start");
  validate_profile(profile);
  return snap_floor(accumulated_work(profile, t1, t2));
}

struct WorkerState {
  IterationStamp current_iterate_index = 0;
  VirtualTime work_started_at = 0.0;
  // Units of one gradient already done at `now` when next_completion is asked.
  double work_accumulated = 0.0;
};

// Time at which the worker's in-progress gradient completes, or kNever when
// the remaining power is zero forever.
inline VirtualTime next_completion(const WorkerProfile& profile, const WorkerState& state,
                                   VirtualTime now) {
  if (!(state.work_accumulated >= 0.0 && state.work_accumulated < 1.0)) {
    throw ConfigurationError("next_completion: work_accumulated must lie in [0, 1)");
  }
  const double remaining = 1.0 - state.work_accumulated;
  if (const auto* fixed = std::get_if<FixedModel>(&profile.model)) {
    return now + remaining * fixed->tau;
  }
  return detail::time_to_accumulate(std::get<UniversalModel>(profile.model).segments, now,
                                    remaining);
}

struct GradientEvent {
  VirtualTime time = 0.0;
  WorkerId worker_id = 0;
  IterationStamp iterate_index = 0;
  std::uint64_t sample_seed = 0;
  std::uint64_t draw_index = 0;  // per-worker completion counter
};

enum class Disposition : std::uint8_t {
  MainTable,
  PlusTable,
  Ia2sgdSlot,
  Minibatch,
  Malenia,
  Discarded,
};

inline constexpr std::size_t kDispositionCount = 6;

inline std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::MainTable: return "main-table";
    case Disposition::PlusTable: return "plus-table";
    case Disposition::Ia2sgdSlot: return "ia2sgd-slot";
    case Disposition::Minibatch: return "minibatch";
    case Disposition::Malenia: return "malenia";
    case Disposition::Discarded: return "discarded";
  }
  return "unknown";
}

inline Disposition disposition_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kDispositionCount; ++i) {
    const auto d = static_cast<Disposition>(i);
    if (to_string(d) == s) return d;
  }
  throw ConfigurationError("unknown event disposition '" + std::string(s) + "'");
}

// One line of the per-event log. Discarded entries are in-flight
// computations aborted by a reassignment; they were never delivered.
struct EventLogEntry {
  VirtualTime time = 0.0;
  WorkerId worker_id = 0;
  IterationStamp iterate_index = 0;
  Disposition disposition = Disposition::MainTable;
  std::uint64_t sample_seed = 0;
};

struct LoopStatus {
  VirtualTime now = 0.0;
  std::uint64_t events_delivered = 0;
  std::uint64_t iterations = 0;
};

enum class StopReason : std::uint8_t { Predicate, TimeLimit };

struct EventLoopOptions {
  std::uint64_t run_seed = 0;
  bool keep_log = true;
  // Events strictly after this instant are never delivered.
  VirtualTime time_limit = kNever;
};

struct EventLoopResult {
  std::vector<EventLogEntry> log;
  std::uint64_t events_delivered = 0;
  std::array<std::uint64_t, kDispositionCount> disposition_counts{};
  std::uint64_t discarded_computations = 0;
  VirtualTime end_time = 0.0;
  StopReason reason = StopReason::Predicate;

  std::uint64_t count(Disposition d) const { return disposition_counts[static_cast<std::size_t>(d)]; }
};

// Owns the simulated workers. Servers steer it from inside on_event; by
// default a worker that just delivered keeps computing at the same iterate.
class WorkerPool {
 public:
  WorkerPool(std::span<const WorkerProfile> profiles, EventLoopOptions options)
      : profiles_(profiles), options_(options), slots_(profiles.size()) {
    if (profiles.empty()) throw ConfigurationError("at least one worker profile is required");
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      if (profiles[i].worker_id != i) {
        throw ConfigurationError("worker profiles must be listed in worker_id order");
      }
      validate_profile(profiles[i]);
    }
  }

  std::size_t size() const noexcept { return slots_.size(); }
  VirtualTime now() const noexcept { return now_; }
  std::uint64_t events_delivered() const noexcept { return result_.events_delivered; }
  IterationStamp assigned_stamp(WorkerId w) const { return slots_.at(w).state.current_iterate_index; }
  bool is_busy(WorkerId w) const { return slots_.at(w).pending != kNever; }

  // Hands worker w a new model at the current instant. In-flight work on the
  // old model is discarded.
  void reassign(WorkerId w, IterationStamp stamp) {
    check_worker(w);
    cancel(w);
    slots_[w].state.current_iterate_index = stamp;
    start(w, now_);
  }

  // Stops worker w until the next reassign/broadcast.
  void idle(WorkerId w) {
    check_worker(w);
    cancel(w);
  }

  // Reassigns every worker; returns the number of aborted computations.
  std::uint64_t broadcast(IterationStamp stamp) {
    const std::uint64_t before = result_.discarded_computations;
    for (WorkerId w = 0; w < slots_.size(); ++w) reassign(w, stamp);
    return result_.discarded_computations - before;
  }

  template <class Server, class Stop>
  EventLoopResult run(Server& server, Stop&& stop) {
    for (WorkerId w = 0; w < slots_.size(); ++w) start(w, 0.0);
    for (;;) {
      if (queue_.empty()) {
        std::ostringstream msg;
        msg << "simulation deadlock: every worker is stalled or idle at t=" << now_;
        throw SimulationDeadlock(now_, msg.str());
      }
      const auto [t, w] = *queue_.begin();
      if (t > options_.time_limit) {
        result_.reason = StopReason::TimeLimit;
        break;
      }
      queue_.erase(queue_.begin());
      now_ = t;
      auto& slot = slots_[w];
      slot.pending = kNever;
      GradientEvent event{t, w, slot.state.current_iterate_index,
                          stream_key(options_.run_seed, w, slot.draws), slot.draws};
      ++slot.draws;
      ++result_.events_delivered;
      start(w, t);

      const std::size_t entry = result_.log.size();
      if (options_.keep_log) result_.log.push_back({t, w, event.iterate_index, Disposition::Discarded, event.sample_seed});
      const Disposition d = server.on_event(static_cast<const GradientEvent&>(event), *this);
      ++result_.disposition_counts[static_cast<std::size_t>(d)];
      if (options_.keep_log) result_.log[entry].disposition = d;

      const LoopStatus status{now_, result_.events_delivered,
                              static_cast<std::uint64_t>(server.iterations())};
      if (stop(status)) {
        result_.reason = StopReason::Predicate;
        break;
      }
    }
    result_.end_time = now_;
    return std::move(result_);
  }

 private:
  struct Slot {
    WorkerState state;
    VirtualTime pending = kNever;
    std::uint64_t draws = 0;
  };

  void check_worker(WorkerId w) const {
    if (w >= slots_.size()) throw ProtocolError("unknown worker " + std::to_string(w));
  }

  void start(WorkerId w, VirtualTime t) {
    auto& slot = slots_[w];
    slot.state.work_started_at = t;
    slot.state.work_accumulated = 0.0;
    slot.pending = next_completion(profiles_[w], slot.state, t);
    if (slot.pending != kNever) queue_.emplace(slot.pending, w);
  }

  void cancel(WorkerId w) {
    auto& slot = slots_[w];
    if (slot.pending == kNever) return;
    queue_.erase({slot.pending, w});
    slot.pending = kNever;
    if (accumulated_work(profiles_[w], slot.state.work_started_at, now_) > 0.0) {
      ++result_.discarded_computations;
      ++result_.disposition_counts[static_cast<std::size_t>(Disposition::Discarded)];
      if (options_.keep_log) {
        result_.log.push_back({now_, w, slot.state.current_iterate_index, Disposition::Discarded});
      }
    }
  }

  std::span<const WorkerProfile> profiles_;
  EventLoopOptions options_;
  std::vector<Slot> slots_;
  std::set<std::pair<VirtualTime, WorkerId>> queue_;
  VirtualTime now_ = 0.0;
  EventLoopResult result_;
};

template <class S>
concept GradientServer = requires(S& s, const GradientEvent& e, WorkerPool& pool) {
  { s.on_event(e, pool) } -> std::same_as<Disposition>;
  { s.iterations() } -> std::convertible_to<std::uint64_t>;
};

// Delivers completions in (time, worker_id) order until `stop` fires after
// some event, the time limit is passed, or every worker stalls (throws
// SimulationDeadlock).
template <GradientServer Server, class Stop>
  requires std::predicate<Stop&, const LoopStatus&>
EventLoopResult run_event_loop(std::span<const WorkerProfile> profiles, Server& server, Stop&& stop,
                               EventLoopOptions options = {}) {
  WorkerPool pool(profiles, options);
  return pool.run(server, stop);
}

inline std::vector<WorkerProfile> fixed_profiles(std::span<const double> taus) {
  std::vector<WorkerProfile> out;
  out.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) out.push_back(WorkerProfile::fixed(i, taus[i]));
  return out;
}

}  // namespace ringleader
