#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ringleader/algorithms/simulate.hpp"
#include "ringleader/algorithms/stepsize.hpp"
#include "ringleader/audit/universal.hpp"
#include "ringleader/cli/config.hpp"
#include "ringleader/problems/quadratic.hpp"
#include "ringleader/problems/softmax.hpp"
#include "ringleader/rng.hpp"

namespace ringleader::cli {

using AnyProblem = std::variant<QuadraticProblem, SoftmaxProblem>;

inline AnyProblem build_problem(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  if (p.kind == ProblemKind::Quadratic) {
    return make_quadratic(p.dimension, cfg.workers.n, p.heterogeneity, p.sigma_sq, p.seed);
  }
  return make_softmax_classification(p.dimension, p.classes, cfg.workers.n, p.alpha, p.samples_per_client, p.seed);
}

// tau_i = i + |eta_i| with eta_i ~ N(0, i) (variance i), i = 1..n, drawn from
// the run seed's own stream.
inline std::vector<double> generated_taus(std::size_t n, std::uint64_t seed) {
  Rng rng(stream_key(seed, 0x7A0ULL));
  std::vector<double> taus;
  for (std::size_t i = 1; i <= n; ++i) {
    const double sd = std::sqrt(static_cast<double>(i));
    taus.push_back(static_cast<double>(i) + std::abs(sd * rng.normal()));
  }
  return taus;
}

inline std::vector<WorkerProfile> build_profiles(const WorkersConfig& w, std::uint64_t seed) {
  switch (w.source) {
    case WorkerSource::TauList: return fixed_profiles(w.taus);
    case WorkerSource::TauGenerator: return fixed_profiles(generated_taus(w.n, seed));
    case WorkerSource::RoleSwitch:
      return audit::adversarial_roleswitch_profiles(w.roleswitch_s, w.roleswitch_base_tau, w.roleswitch_periods);
    case WorkerSource::Power: {
      std::vector<WorkerProfile> out;
      for (std::size_t i = 0; i < w.n; ++i) out.push_back(WorkerProfile::universal(i, w.power[i]));
      return out;
    }
  }
  throw ConfigurationError("unknown worker source");
}

struct ProblemSummary {
  std::size_t n = 0;
  std::size_t dimension = 0;
  SmoothnessConstants constants;
  double sigma_sq = 0.0;  // the problem's own constant
  bool sigma_sq_is_estimate = false;
  double delta = 0.0;
};

inline ProblemSummary summarize(const AnyProblem& problem) {
  return std::visit(
      [](const auto& p) {
        ProblemSummary s;
        s.n = p.workers();
        s.dimension = p.dimension();
        s.constants = p.constants();
        s.sigma_sq = p.sigma_sq();
        s.sigma_sq_is_estimate = p.sigma_sq_is_estimate();
        s.delta = initial_gap(p);
        return s;
      },
      problem);
}

// Everything one (algorithm, gamma, seed) run needs, resolved from the config.
struct RunPlan {
  Algorithm algorithm = Algorithm::Ringleader;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double sigma_sq = 0.0;  // used by the stopping rule and the theory stepsize; estimates are doubled
  std::optional<double> epsilon;
  double B_lower = 1.0;
  std::optional<std::uint64_t> predicted_K;
  Horizon horizon;
  std::vector<WorkerProfile> profiles;
  std::optional<std::vector<double>> taus;
};

inline double tau_max(const std::vector<double>& taus) { return *std::max_element(taus.begin(), taus.end()); }

inline double tau_mean(const std::vector<double>& taus) {
  double s = 0.0;
  for (double t : taus) s += t;
  return s / static_cast<double>(taus.size());
}

inline RunPlan plan_run(const RunConfig& cfg, const ProblemSummary& ps, Algorithm a, std::optional<double> gamma,
                        std::uint64_t seed) {
  RunPlan plan;
  plan.algorithm = a;
  plan.seed = seed;
  plan.sigma_sq = cfg.sigma_sq.value_or(ps.sigma_sq_is_estimate ? 2.0 * ps.sigma_sq : ps.sigma_sq);
  plan.epsilon = cfg.epsilon;
  plan.horizon = cfg.horizon;
  plan.profiles = build_profiles(cfg.workers, seed);
  if (std::all_of(plan.profiles.begin(), plan.profiles.end(), [](const auto& p) { return p.is_fixed(); })) {
    std::vector<double> taus;
    for (const auto& p : plan.profiles) taus.push_back(p.tau());
    plan.taus = std::move(taus);
  }
  const std::size_t n = ps.n;
  const bool uses_rule = a == Algorithm::Malenia || a == Algorithm::RingleaderUniversal;
  if (uses_rule && plan.sigma_sq > 0.0 && !plan.epsilon) {
    throw ConfigurationError(std::string(to_string(a)) + " with sigma_sq > 0 needs epsilon");
  }
  if (cfg.stepsize.B_lower) {
    plan.B_lower = *cfg.stepsize.B_lower;
  } else if (uses_rule && plan.epsilon) {
    plan.B_lower = StoppingRule::malenia_condition(plan.sigma_sq, *plan.epsilon).threshold(n);
  } else if (a == Algorithm::Ringleader && plan.taus) {
    plan.B_lower = std::max(1.0, tau_max(*plan.taus) / (2.0 * tau_mean(*plan.taus)));
  }
  if (cfg.stepsize.policy == StepsizePolicy::Theory) {
    if (!plan.epsilon) throw ConfigurationError("stepsize = theory needs epsilon");
    const auto model = a == Algorithm::RingleaderUniversal ? ComputeModel::Universal : ComputeModel::Fixed;
    const double L = ps.constants.L_bound;
    plan.gamma = theory_stepsize(n, L, plan.sigma_sq, *plan.epsilon, plan.B_lower, model);
    plan.predicted_K = predicted_iterations(n, L, ps.delta, plan.sigma_sq, *plan.epsilon, plan.B_lower, model);
    if (!plan.horizon.iterations && !plan.horizon.time_budget && !plan.horizon.target) {
      plan.horizon.iterations = plan.predicted_K;
    }
  } else {
    if (!gamma) throw ConfigurationError("no stepsize value for this run");
    plan.gamma = *gamma;
  }
  if (!plan.horizon.iterations && !plan.horizon.time_budget && !plan.horizon.target) {
    throw ConfigurationError("set horizon.iterations, horizon.time_budget or horizon.target");
  }
  return plan;
}

inline RunOptions run_options(const RunPlan& plan, bool keep_for_replay) {
  RunOptions o;
  o.algorithm = plan.algorithm;
  o.gamma = plan.gamma;
  o.rule_sigma_sq = plan.sigma_sq;
  o.epsilon = plan.epsilon.value_or(0.0);
  o.horizon = plan.horizon;
  o.seed = plan.seed;
  o.keep_log = true;
  o.keep_directions = keep_for_replay;
  o.keep_iterates = keep_for_replay;
  return o;
}

inline RunResult execute(const AnyProblem& problem, const RunPlan& plan, bool keep_for_replay) {
  return std::visit([&](const auto& p) { return simulate(p, plan.profiles, run_options(plan, keep_for_replay)); },
                    problem);
}

}  // namespace ringleader::cli
