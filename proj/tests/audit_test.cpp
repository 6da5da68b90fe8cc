#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ringleader/algorithms/simulate.hpp"
#include "ringleader/algorithms/stepsize.hpp"
#include "ringleader/audit/checks.hpp"
#include "ringleader/audit/complexity.hpp"
#include "ringleader/audit/replay.hpp"
#include "ringleader/audit/universal.hpp"
#include "ringleader/problems/quadratic.hpp"

using namespace ringleader;
using namespace ringleader::audit;

namespace {

RunOptions options_for(Algorithm a, double gamma, std::uint64_t iterations, std::uint64_t seed = 1) {
  RunOptions o;
  o.algorithm = a;
  o.gamma = gamma;
  o.horizon.iterations = iterations;
  o.seed = seed;
  return o;
}

std::vector<double> random_taus(Rng& rng, std::size_t n) {
  std::vector<double> taus;
  for (std::size_t i = 0; i < n; ++i) taus.push_back(static_cast<double>(16 + rng.below(1000)) / 64.0);
  return taus;
}

RunTrace trace_of(const QuadraticProblem& q, const std::vector<double>& taus, Algorithm a, std::uint64_t iters,
                  std::uint64_t seed = 1) {
  const auto profiles = fixed_profiles(taus);
  return make_trace(simulate(q, profiles, options_for(a, 0.05, iters, seed)), profiles);
}

// Piecewise profile with dyadic breakpoints and powers.
WorkerProfile random_piecewise(Rng& rng, WorkerId id, std::size_t segments) {
  std::vector<PowerSegment> s;
  double t = 0.0;
  for (std::size_t j = 0; j < segments; ++j) {
    s.push_back({t, std::ldexp(1.0, static_cast<int>(rng.below(6)) - 3)});
    t += static_cast<double>(1 + rng.below(16)) / 8.0;
  }
  return WorkerProfile::universal(id, std::move(s));
}

}  // namespace

TEST(Report, LineFormat) {
  CheckResult r;
  r.name = "delay-bound";
  r.detail = "max delay 5";
  r.violate(7, "worker 1 delay 5 > 4");
  EXPECT_EQ(format_line(r), "delay-bound\tfail\tmax delay 5 (1 violations)\twitness #7: worker 1 delay 5 > 4");
  AuditReport report;
  report.add(r);
  report.add(not_applicable("round-timing", "universal computation model"));
  EXPECT_TRUE(report.any_failed());
  std::ostringstream os;
  report.write(os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(DelayBound, SingleWorkerHasZeroDelays) {
  const auto q = make_quadratic(3, 1, 0.0, 0.0, 1);
  const auto t = trace_of(q, {0.75}, Algorithm::Ringleader, 30);
  const auto r = check_delay_bound(t);
  EXPECT_TRUE(r.passed()) << format_line(r);
  for (const auto& rec : t.records) EXPECT_EQ(rec.max_delay(), 0u);
}

TEST(DelayBound, ThreeWorkersFiftyRounds) {
  const auto q = make_quadratic(3, 3, 1.0, 0.0, 2);
  const auto t = trace_of(q, {0.5, 1.25, 3.0}, Algorithm::Ringleader, 150);
  const auto r = check_delay_bound(t);
  EXPECT_TRUE(r.passed()) << format_line(r);
  std::uint64_t worst = 0;
  for (const auto& rec : t.records) worst = std::max(worst, rec.max_delay());
  EXPECT_LE(worst, 4u);
  EXPECT_EQ(r.visited, 150u);
}

TEST(DelayBound, OtherMethodsAreNotApplicable) {
  const auto q = make_quadratic(3, 2, 1.0, 0.0, 2);
  const auto t = trace_of(q, {1.0, 4.0}, Algorithm::Ia2sgd, 20);
  EXPECT_EQ(check_delay_bound(t).status, CheckStatus::NotApplicable);
}

TEST(DelayBound, ForgedDelayIsCaughtWithWitness) {
  const auto q = make_quadratic(3, 3, 1.0, 0.0, 2);
  auto t = trace_of(q, {1.0, 2.0, 3.0}, Algorithm::Ringleader, 30);
  t.records[17].delays[2] = 5;
  const auto r = check_delay_bound(t);
  ASSERT_TRUE(r.failed());
  EXPECT_EQ(r.witnesses.front().index, 17u);
}

TEST(DelayBound, ForgedRoundStartIsCaught) {
  const auto q = make_quadratic(3, 3, 1.0, 0.0, 2);
  auto t = trace_of(q, {1.0, 2.0, 3.0}, Algorithm::Ringleader, 30);
  t.records[6].delays = {1, 1, 0};
  EXPECT_TRUE(check_delay_bound(t).failed());
}

TEST(DelayBoundProperty, RandomTausFiveWorkers) {
  Rng rng(31);
  const auto q = make_quadratic(2, 5, 1.0, 0.0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = trace_of(q, random_taus(rng, 5), Algorithm::Ringleader, 5 * 20, trial);
    const auto r = check_delay_bound(t);
    ASSERT_TRUE(r.passed()) << format_line(r);
  }
}

TEST(RoundTiming, UnequalExample) {
  const auto q = make_quadratic(2, 3, 1.0, 0.0, 4);
  const auto t = trace_of(q, {1.0, 1.0, 10.0}, Algorithm::Ringleader, 3);
  // Both fast workers deliver ten times before the slow one's first.
  EXPECT_EQ(t.records[0].batch, (std::vector<std::uint64_t>{10, 10, 1}));
  EXPECT_DOUBLE_EQ(t.records[0].B_k, 2.5);
  const auto r = check_round_timing(t);
  EXPECT_TRUE(r.passed()) << format_line(r);
  EXPECT_GE(t.records[0].B_k, 1.25);
}

TEST(RoundTiming, EqualTausTwoWorkers) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  const auto t = trace_of(q, {1.0, 1.0}, Algorithm::Ringleader, 10);
  // Ties go to worker 0, so the worker that closes a round alternates and
  // rounds alternate between 2 tau and tau.
  const auto timing = round_timing(t);
  EXPECT_EQ(timing.durations, (std::vector<VirtualTime>{2.0, 1.0, 2.0, 1.0, 2.0}));
  EXPECT_TRUE(check_round_timing(t).passed());
}

TEST(RoundTiming, SingleWorkerRoundIsOneGradient) {
  const auto q = make_quadratic(2, 1, 0.0, 0.0, 4);
  const auto t = trace_of(q, {1.5}, Algorithm::Ringleader, 5);
  for (auto d : round_timing(t).durations) EXPECT_DOUBLE_EQ(d, 1.5);
  EXPECT_TRUE(check_round_timing(t).passed());
}

TEST(RoundTiming, ForgedSlowRoundIsCaught) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  auto t = trace_of(q, {1.0, 2.0}, Algorithm::Ringleader, 10);
  for (std::size_t k = 5; k < t.records.size(); ++k) t.records[k].time += 10.0;
  EXPECT_TRUE(check_round_timing(t).failed());
}

TEST(RoundTiming, UniversalTraceIsNotApplicable) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  const auto profiles = adversarial_roleswitch_profiles(2, 1.0, 20);
  const auto run = simulate(q, profiles, options_for(Algorithm::Ringleader, 0.05, 10));
  EXPECT_EQ(check_round_timing(make_trace(run, profiles)).status, CheckStatus::NotApplicable);
}

TEST(RoundTimingProperty, RandomTausEveryWorkerCount) {
  Rng rng(47);
  for (std::size_t n : {1u, 2u, 3u, 4u, 6u}) {
    const auto q = make_quadratic(2, n, 1.0, 0.0, n);
    for (int trial = 0; trial < 40; ++trial) {
      const auto t = trace_of(q, random_taus(rng, n), Algorithm::Ringleader, n * 30, trial);
      const auto r = check_round_timing(t);
      ASSERT_TRUE(r.passed()) << format_line(r);
      ASSERT_EQ(r.visited, 30u);
    }
  }
}

TEST(Records, CleanTracePasses) {
  const auto q = make_quadratic(2, 3, 1.0, 0.0, 4);
  for (auto a : kAllAlgorithms) {
    RunOptions o = options_for(a, 0.05, 25);
    o.rule_sigma_sq = 1.0;
    o.epsilon = 0.1;
    const auto profiles = fixed_profiles(std::vector<double>{1.0, 1.5, 4.0});
    const auto t = make_trace(simulate(q, profiles, o), profiles);
    const auto r = check_records(t);
    EXPECT_TRUE(r.passed()) << to_string(a) << ": " << format_line(r);
  }
}

TEST(Records, ForgedHarmonicMeanIsCaught) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  auto t = trace_of(q, {1.0, 3.0}, Algorithm::Ringleader, 8);
  t.records[3].B_k += 0.25;
  EXPECT_TRUE(check_records(t).failed());
}

TEST(Conservation, RingleaderAccountsForEveryEvent) {
  const auto q = make_quadratic(2, 4, 1.0, 0.5, 4);
  const auto t = trace_of(q, {0.5, 1.0, 2.5, 7.0}, Algorithm::Ringleader, 80);
  const auto r = check_conservation(t);
  EXPECT_TRUE(r.passed()) << format_line(r);
  EXPECT_EQ(t.count(Disposition::MainTable) + t.count(Disposition::PlusTable), t.events_delivered);
  EXPECT_GT(t.count(Disposition::PlusTable), 0u);
}

TEST(Conservation, MaleniaReportsDiscards) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  const auto t = trace_of(q, {0.75, 2.0}, Algorithm::MaleniaParameterFree, 10);
  const auto r = check_conservation(t);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(t.count(Disposition::Discarded), 0u);
  EXPECT_NE(r.detail.find("discarded"), std::string::npos);
}

TEST(Conservation, LostEventIsCaught) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 4);
  auto t = trace_of(q, {1.0, 3.0}, Algorithm::Ringleader, 8);
  t.disposition_counts[static_cast<std::size_t>(Disposition::PlusTable)] -= 1;
  t.disposition_counts[static_cast<std::size_t>(Disposition::Discarded)] += 1;
  EXPECT_TRUE(check_conservation(t).failed());
}

TEST(Convergence, NoiselessTheoryRun) {
  const auto q = make_quadratic(3, 2, 1.0, 0.0, 5);
  const double eps = 0.05;
  const double L = q.constants().L_bound;
  const double gamma = theory_stepsize(2, L, 0.0, eps, 1.0);
  const auto K = predicted_iterations(2, L, initial_gap(q), 0.0, eps, 1.0);
  const auto profiles = fixed_profiles(std::vector<double>{1.0, 2.0});
  const auto t = make_trace(simulate(q, profiles, options_for(Algorithm::Ringleader, gamma, K)), profiles);
  const auto r = check_convergence(t, eps, K);
  EXPECT_TRUE(r.passed()) << format_line(r);
}

TEST(Convergence, ShortTraceIsInconclusive) {
  const auto q = make_quadratic(3, 2, 1.0, 0.0, 5);
  const auto t = trace_of(q, {1.0, 2.0}, Algorithm::Ringleader, 10);
  EXPECT_EQ(check_convergence(t, 0.1, 11).status, CheckStatus::Inconclusive);
}

TEST(Convergence, LargeEpsilonPassesAtOnce) {
  const auto q = make_quadratic(3, 2, 1.0, 0.0, 5);
  const auto t = trace_of(q, {1.0, 2.0}, Algorithm::Ringleader, 1);
  EXPECT_TRUE(check_convergence(t, 2.0 * t.records[0].grad_norm_sq, 1).passed());
}

TEST(Convergence, EnsembleUsesSeedAverage) {
  RunTrace a, b;
  a.records.resize(2);
  b.records.resize(2);
  a.records[0].grad_norm_sq = a.records[1].grad_norm_sq = 0.1;
  b.records[0].grad_norm_sq = b.records[1].grad_norm_sq = 0.13;
  const std::vector<RunTrace> ts{a, b};
  EXPECT_TRUE(check_convergence_ensemble(ts, 0.1, 2).passed());
  EXPECT_TRUE(check_convergence_ensemble(ts, 0.09, 2).failed());
}

TEST(ShadowReplay, EveryMethodRebuildsItsDirections) {
  const auto q = make_quadratic(4, 3, 1.0, 2.0, 6);
  const auto profiles = fixed_profiles(std::vector<double>{0.75, 1.25, 5.0});
  for (auto a : kAllAlgorithms) {
    RunOptions o = options_for(a, 0.02, 60, 9);
    o.rule_sigma_sq = 2.0;
    o.epsilon = 0.1;
    o.keep_directions = true;
    o.keep_iterates = true;
    const auto run = simulate(q, profiles, o);
    const auto r = check_shadow_replay(q, run);
    EXPECT_TRUE(r.passed()) << to_string(a) << ": " << format_line(r);
    EXPECT_EQ(r.visited, 60u);
  }
}

TEST(ShadowReplay, TamperedDirectionIsCaught) {
  const auto q = make_quadratic(4, 3, 1.0, 2.0, 6);
  const auto profiles = fixed_profiles(std::vector<double>{0.75, 1.25, 5.0});
  RunOptions o = options_for(Algorithm::Ringleader, 0.02, 30, 9);
  o.keep_directions = true;
  o.keep_iterates = true;
  auto run = simulate(q, profiles, o);
  (*run.records[12].direction)[1] *= 1.0 + 1e-9;
  const auto r = check_shadow_replay(q, run);
  ASSERT_TRUE(r.failed());
  EXPECT_EQ(r.witnesses.front().index, 12u);
}

TEST(ShadowReplay, NeedsIterates) {
  const auto q = make_quadratic(2, 2, 1.0, 1.0, 6);
  const auto profiles = fixed_profiles(std::vector<double>{1.0, 2.0});
  const auto run = simulate(q, profiles, options_for(Algorithm::Ringleader, 0.02, 10));
  EXPECT_EQ(check_shadow_replay(q, run).status, CheckStatus::Inconclusive);
}

namespace {

// A one-record run at x^0 with the given batch, for probing the surrogate.
RunResult synthetic_run(const QuadraticProblem& q, std::vector<std::uint64_t> batch) {
  RunResult run;
  IterationRecord rec;
  rec.delays.assign(q.workers(), 0);
  rec.B_k = harmonic_batch(batch);
  rec.batch = std::move(batch);
  run.records.push_back(rec);
  run.iterates = {q.initial_point(), q.initial_point()};
  return run;
}

}  // namespace

TEST(VarianceSurrogate, NoiselessIsZero) {
  const auto q = make_quadratic(3, 2, 1.0, 0.0, 7);
  const auto rep = check_variance_surrogate(q, synthetic_run(q, {1, 3}), 1, 100);
  EXPECT_TRUE(rep.result.passed());
  EXPECT_EQ(rep.samples.front().empirical, 0.0);
}

TEST(VarianceSurrogate, UnitBatchesMatchSigmaOverN) {
  const auto q = make_quadratic(6, 3, 1.0, 3.0, 7);
  const auto rep = check_variance_surrogate(q, synthetic_run(q, {1, 1, 1}), 1);
  EXPECT_TRUE(rep.result.passed()) << format_line(rep.result);
  EXPECT_NEAR(rep.samples.front().empirical, 1.0, 0.1);
  EXPECT_DOUBLE_EQ(rep.samples.front().bound, 1.0);
}

TEST(VarianceSurrogate, DoublingBatchesHalvesTheMoment) {
  const auto q = make_quadratic(6, 2, 1.0, 4.0, 7);
  const auto one = check_variance_surrogate(q, synthetic_run(q, {1, 3}), 1);
  const auto two = check_variance_surrogate(q, synthetic_run(q, {2, 6}), 1);
  const double ratio = two.samples.front().empirical / one.samples.front().empirical;
  EXPECT_NEAR(ratio, 0.5, 0.05);
}

TEST(VarianceSurrogate, RingleaderRunSamples) {
  const auto q = make_quadratic(4, 3, 1.0, 1.5, 8);
  const auto profiles = fixed_profiles(std::vector<double>{0.5, 1.0, 3.0});
  RunOptions o = options_for(Algorithm::Ringleader, 0.05, 60);
  o.keep_iterates = true;
  const auto rep = check_variance_surrogate(q, simulate(q, profiles, o), 5, 4000);
  EXPECT_TRUE(rep.result.passed()) << format_line(rep.result);
  EXPECT_EQ(rep.samples.size(), 5u);
  EXPECT_EQ(rep.samples.back().k, 59u);
}

TEST(Ia2sgdGrowth, DelayGrowsWithSpread) {
  for (double m : {4.0, 16.0, 64.0}) {
    const auto q = make_quadratic(2, 2, 1.0, 0.0, 9);
    const auto ia = trace_of(q, {1.0, m}, Algorithm::Ia2sgd, static_cast<std::uint64_t>(4 * m));
    const auto r = check_ia2sgd_delay_growth(ia);
    EXPECT_TRUE(r.passed()) << format_line(r);
    const auto rl = trace_of(q, {1.0, m}, Algorithm::Ringleader, static_cast<std::uint64_t>(4 * m));
    std::uint64_t worst = 0;
    for (const auto& rec : rl.records) worst = std::max(worst, rec.max_delay());
    EXPECT_LE(worst, 2u);
  }
}

TEST(Ia2sgdGrowth, ShortTraceIsInconclusive) {
  const auto q = make_quadratic(2, 2, 1.0, 0.0, 9);
  const auto ia = trace_of(q, {1.0, 16.0}, Algorithm::Ia2sgd, 3);
  EXPECT_EQ(check_ia2sgd_delay_growth(ia).status, CheckStatus::Inconclusive);
}

TEST(RoleSwitch, ProfileShape) {
  const auto p = adversarial_roleswitch_profiles(8, 1.0, 3);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(completion_count(p[0], 0.0, 1.0), 8u);
  EXPECT_EQ(completion_count(p[1], 0.0, 1.0), 1u);
  EXPECT_EQ(completion_count(p[0], 1.0, 2.0), 1u);
  EXPECT_EQ(completion_count(p[1], 1.0, 2.0), 8u);
  EXPECT_EQ(completion_count(p[0], 0.0, 2.0), completion_count(p[1], 0.0, 2.0));
}

TEST(RoleSwitch, PlainRingleaderBatchStaysBelowTwo) {
  const auto q = make_quadratic(2, 2, 1.0, 1.0, 10);
  const auto profiles = adversarial_roleswitch_profiles(8, 1.0, 200);
  const auto run = simulate(q, profiles, options_for(Algorithm::Ringleader, 0.01, 100));
  for (const auto& rec : run.records) {
    EXPECT_GE(rec.B_k, 1.0);
    EXPECT_LE(rec.B_k, 2.0);
  }
}

TEST(RoleSwitch, MaleniaConditionLiftsBatchToSPlusOne) {
  const auto q = make_quadratic(2, 2, 1.0, 18.0, 10);
  const auto profiles = adversarial_roleswitch_profiles(8, 1.0, 200);
  RunOptions o = options_for(Algorithm::RingleaderUniversal, 0.01, 100);
  o.rule_sigma_sq = 18.0;
  o.epsilon = 1.0;  // threshold 18 / (2 * 1) = 9
  const auto run = simulate(q, profiles, o);
  for (const auto& rec : run.records) EXPECT_GE(rec.B_k, 9.0);
}

TEST(RoleSwitch, UnitRatioIsFixedModelInDisguise) {
  const auto q = make_quadratic(2, 2, 1.0, 1.0, 10);
  const auto disguised = adversarial_roleswitch_profiles(1, 0.5, 100);
  const auto fixed = fixed_profiles(std::vector<double>{0.5, 0.5});
  const auto a = simulate(q, disguised, options_for(Algorithm::Ringleader, 0.05, 40));
  const auto b = simulate(q, fixed, options_for(Algorithm::Ringleader, 0.05, 40));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].time, b.records[k].time);
    EXPECT_EQ(a.records[k].batch, b.records[k].batch);
  }
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(TSequence, FixedModelInDisguise) {
  const std::vector<WorkerProfile> p{WorkerProfile::universal(0, {{0.0, 0.5}})};
  const auto T = t_sequence(p, 1.0, 5);
  for (std::size_t k = 0; k <= 5; ++k) EXPECT_DOUBLE_EQ(T[k], 2.0 * static_cast<double>(k));
}

TEST(TSequence, SlowestWorkerGates) {
  const auto p = fixed_profiles(std::vector<double>{0.5, 1.25, 3.0});
  const auto T = t_sequence(p, 1.0, 6);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_DOUBLE_EQ(T[k] - T[k - 1], 3.0);
}

TEST(TSequence, RoleSwitchSegmentWalk) {
  const auto p = adversarial_roleswitch_profiles(8, 1.0, 10);
  // At t = 2 both workers have 9 gradients; just before, one has 8.
  const auto T = t_sequence(p, 9.0, 2);
  EXPECT_DOUBLE_EQ(T[1], 2.0);
  EXPECT_DOUBLE_EQ(T[2], 4.0);
  const auto q = make_quadratic(2, 2, 1.0, 18.0, 10);
  RunOptions o = options_for(Algorithm::RingleaderUniversal, 0.01, 2);
  o.rule_sigma_sq = 18.0;
  o.epsilon = 1.0;
  const auto run = simulate(q, p, o);
  EXPECT_LE(run.records[1].time, T[2]);
}

TEST(TSequence, UnreachableThresholdIsNever) {
  const std::vector<WorkerProfile> p{WorkerProfile::universal(0, {{0.0, 1.0}, {2.5, 0.0}}),
                                     WorkerProfile::fixed(1, 1.0)};
  const auto T = t_sequence(p, 1.0, 4);
  EXPECT_DOUBLE_EQ(T[1], 1.0);
  EXPECT_DOUBLE_EQ(T[2], 2.0);
  EXPECT_EQ(T[3], kNever);
  EXPECT_EQ(T[4], kNever);
}

TEST(TSequence, MidRoundUpdatesCanPassCeilTwoKOverN) {
  // Equal speeds: the first update lands at T^1 = 1, the other three of the
  // round at t = 2 > T^{ceil(2*2/4)} = T^1. Whole rounds stay in bound.
  const auto q = make_quadratic(2, 4, 1.0, 0.0, 11);
  const auto p = fixed_profiles(std::vector<double>{1.0, 1.0, 1.0, 1.0});
  const auto run = simulate(q, p, options_for(Algorithm::Ringleader, 0.05, 8));
  const auto T = t_sequence(p, 1.0, 4);
  EXPECT_DOUBLE_EQ(run.records[1].time, 2.0);
  EXPECT_GT(run.records[1].time, T[1]);
  const auto r = check_t_sequence_bound(make_trace(run, p), T);
  EXPECT_TRUE(r.passed()) << format_line(r);
  EXPECT_NE(r.detail.find("mid-round"), std::string::npos);
}

TEST(TSequenceProperty, UniversalRingleaderStaysBelowRecursion) {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    std::vector<WorkerProfile> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(random_piecewise(rng, i, 400));
    const double sigma_sq = static_cast<double>(rng.below(4) * n);
    const auto q = make_quadratic(2, n, 1.0, sigma_sq, trial);
    RunOptions o = options_for(Algorithm::RingleaderUniversal, 0.01, n * 10, trial);
    o.rule_sigma_sq = sigma_sq;
    o.epsilon = 1.0;
    const auto run = simulate(q, p, o);
    const auto T = t_sequence(p, sigma_sq, 1.0, 2 * 10);
    const auto r = check_t_sequence_bound(make_trace(run, p), T);
    ASSERT_TRUE(r.passed()) << "trial " << trial << ": " << format_line(r);
  }
}

TEST(Complexity, FittedConstant) {
  ComplexityPoint p;
  p.L = 2.0;
  p.delta = 1.0;
  p.epsilon = 0.5;
  p.sigma_sq = 4.0;
  p.n = 2;
  p.tau_n = 10.0;
  p.tau_avg = 4.0;
  p.measured = 112.0;
  // sigma^2/(n eps) = 4, so (L Delta / eps)(tau_n + 4 tau_avg) = 4 * 26
  const std::vector<ComplexityPoint> grid{p};
  const auto fits = fit_time_complexity(grid);
  ASSERT_EQ(fits.size(), 1u);
  EXPECT_DOUBLE_EQ(fits[0].bound_expression, 104.0);
  EXPECT_DOUBLE_EQ(fits[0].fitted_constant, 112.0 / 104.0);
}

TEST(Complexity, UnconvergedPointsAreSkipped) {
  ComplexityPoint p;
  p.L = p.delta = p.epsilon = 1.0;
  p.tau_n = p.tau_avg = 1.0;
  std::vector<std::string> skipped;
  const std::vector<ComplexityPoint> grid{p};
  EXPECT_TRUE(fit_time_complexity(grid, &skipped).empty());
  EXPECT_EQ(skipped.size(), 1u);
}

TEST(Complexity, SpreadCheck) {
  std::vector<ComplexityFit> fits(3);
  fits[0].fitted_constant = 1.0;
  fits[1].fitted_constant = 3.0;
  fits[2].fitted_constant = 2.0;
  EXPECT_TRUE(check_fit_bounded(fits, Algorithm::Ringleader, 4.0).passed());
  EXPECT_TRUE(check_fit_bounded(fits, Algorithm::Ringleader, 2.0).failed());
  EXPECT_EQ(check_fit_bounded(fits, Algorithm::Minibatch, 2.0).status, CheckStatus::Inconclusive);
}
