#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ringleader/algorithms/ia2sgd.hpp"
#include "ringleader/algorithms/malenia.hpp"
#include "ringleader/algorithms/minibatch.hpp"
#include "ringleader/algorithms/records.hpp"
#include "ringleader/algorithms/ringleader.hpp"
#include "ringleader/algorithms/stopping.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader {

enum class Algorithm : std::uint8_t {
  Ringleader,
  RingleaderUniversal,
  Malenia,
  MaleniaParameterFree,
  Ia2sgd,
  Minibatch,
};

inline constexpr std::array<Algorithm, 6> kAllAlgorithms{
    Algorithm::Ringleader, Algorithm::RingleaderUniversal, Algorithm::Malenia,
    Algorithm::MaleniaParameterFree, Algorithm::Ia2sgd, Algorithm::Minibatch};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Ringleader: return "ringleader";
    case Algorithm::RingleaderUniversal: return "ringleader-universal";
    case Algorithm::Malenia: return "malenia";
    case Algorithm::MaleniaParameterFree: return "malenia-parameter-free";
    case Algorithm::Ia2sgd: return "ia2sgd";
    case Algorithm::Minibatch: return "minibatch";
  }
  return "unknown";
}

inline Algorithm algorithm_from_string(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  throw ConfigurationError("unknown algorithm '" + std::string(s) + "'");
}

inline bool is_ringleader(Algorithm a) {
  return a == Algorithm::Ringleader || a == Algorithm::RingleaderUniversal;
}

// Whichever limit is reached first ends the run; at least one must be set.
struct Horizon {
  std::optional<std::uint64_t> iterations;
  std::optional<VirtualTime> time_budget;
  std::optional<double> target;  // stop once ||grad f(x^k)||^2 <= target
};

enum class RunEnd : std::uint8_t { Iterations, TimeBudget, Target, Diverged };

inline std::string_view to_string(RunEnd e) {
  switch (e) {
    case RunEnd::Iterations: return "iterations";
    case RunEnd::TimeBudget: return "time-budget";
    case RunEnd::Target: return "target";
    case RunEnd::Diverged: return "diverged";
  }
  return "unknown";
}

struct RunOptions {
  Algorithm algorithm = Algorithm::Ringleader;
  double gamma = 0.0;
  // Malenia condition parameters (malenia, ringleader-universal).
  double rule_sigma_sq = 0.0;
  double epsilon = 0.0;
  Horizon horizon;
  std::uint64_t seed = 0;
  bool keep_log = true;
  bool keep_directions = false;
  bool keep_iterates = false;
};

struct RunResult {
  Algorithm algorithm = Algorithm::Ringleader;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  EventLoopResult events;
  std::vector<Vector> iterates;
  Vector final_x;
  double initial_grad_norm_sq = 0.0;
  double final_grad_norm_sq = 0.0;
  RunEnd end = RunEnd::Iterations;

  bool diverged() const { return end == RunEnd::Diverged; }

  // ||grad f(x^k)||^2 for k = 0..K, the last entry being the final iterate.
  std::vector<double> grad_norm_series() const {
    std::vector<double> out;
    out.reserve(records.size() + 1);
    for (const auto& r : records) out.push_back(r.grad_norm_sq);
    out.push_back(final_grad_norm_sq);
    return out;
  }

  // Virtual time at which an iterate with ||grad f||^2 <= eps first exists.
  std::optional<VirtualTime> time_to(double eps) const {
    if (initial_grad_norm_sq <= eps) return 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
      const double next = k + 1 < records.size() ? records[k + 1].grad_norm_sq : final_grad_norm_sq;
      if (next <= eps) return records[k].time;
    }
    return std::nullopt;
  }
};

inline StoppingRule rule_for(Algorithm a, double sigma_sq, double epsilon) {
  if (a == Algorithm::Malenia || a == Algorithm::RingleaderUniversal) {
    return StoppingRule::malenia_condition(sigma_sq, epsilon);
  }
  return StoppingRule::all_workers_once();
}

namespace detail {

template <class Server>
RunResult drive(Server& server, std::span<const WorkerProfile> profiles, const RunOptions& options) {
  const auto& h = options.horizon;
  RunResult out;
  out.algorithm = options.algorithm;
  out.gamma = options.gamma;
  out.seed = options.seed;
  out.initial_grad_norm_sq = server.current_grad_norm_sq();
  RunEnd end = RunEnd::TimeBudget;
  auto stop = [&](const LoopStatus& s) {
    if (server.diverged()) {
      end = RunEnd::Diverged;
      return true;
    }
    if (h.iterations && s.iterations >= *h.iterations) {
      end = RunEnd::Iterations;
      return true;
    }
    if (h.target && s.iterations > 0 && server.current_grad_norm_sq() <= *h.target) {
      end = RunEnd::Target;
      return true;
    }
    return false;
  };
  EventLoopOptions loop;
  loop.run_seed = options.seed;
  loop.keep_log = options.keep_log;
  loop.time_limit = h.time_budget.value_or(kNever);
  out.events = run_event_loop(profiles, server, stop, loop);
  out.end = out.events.reason == StopReason::TimeLimit ? RunEnd::TimeBudget : end;
  out.final_x = server.x();
  out.final_grad_norm_sq = server.current_grad_norm_sq();
  out.records = server.take_records();
  out.iterates = server.take_iterates();
  return out;
}

}  // namespace detail

template <Problem P>
RunResult simulate(const P& problem, std::span<const WorkerProfile> profiles, const RunOptions& options) {
  if (profiles.size() != problem.workers()) {
    throw ConfigurationError("got " + std::to_string(profiles.size()) + " worker profiles for a problem with " +
                             std::to_string(problem.workers()) + " workers");
  }
  const auto& h = options.horizon;
  if (!h.iterations && !h.time_budget && !h.target) {
    throw ConfigurationError("horizon needs an iteration count, a time budget or a target");
  }
  if (h.iterations && *h.iterations == 0) throw ConfigurationError("horizon.iterations must be >= 1");
  if (h.time_budget && !(*h.time_budget > 0.0)) throw ConfigurationError("horizon.time_budget must be > 0");
  const ServerOptions so{options.gamma, options.keep_directions, options.keep_iterates};
  const auto rule = rule_for(options.algorithm, options.rule_sigma_sq, options.epsilon);
  switch (options.algorithm) {
    case Algorithm::Ringleader:
    case Algorithm::RingleaderUniversal: {
      RingleaderServer<P> server(problem, so, rule);
      return detail::drive(server, profiles, options);
    }
    case Algorithm::Malenia:
    case Algorithm::MaleniaParameterFree: {
      MaleniaServer<P> server(problem, so, rule);
      return detail::drive(server, profiles, options);
    }
    case Algorithm::Ia2sgd: {
      Ia2sgdServer<P> server(problem, so);
      return detail::drive(server, profiles, options);
    }
    case Algorithm::Minibatch: {
      MinibatchServer<P> server(problem, so);
      return detail::drive(server, profiles, options);
    }
  }
  throw ConfigurationError("unknown algorithm");
}

}  // namespace ringleader
