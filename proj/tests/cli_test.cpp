#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "ringleader/cli/commands.hpp"

namespace {

using namespace ringleader;
using namespace ringleader::cli;

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ringleader");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ringleader-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "run.cfg";
  write_file(p, text);
  return p;
}

const char* kMinimal = R"(problem.kind = quadratic
problem.dimension = 5
problem.sigma_sq = 0
algorithm = ringleader
workers.n = 1
workers.tau = 1
stepsize = fixed:0.1
horizon.iterations = 10
)";

const char* kThreeWorkers = R"(problem.kind = quadratic
problem.dimension = 4
problem.sigma_sq = 0.5
algorithm = ringleader
workers.n = 3
workers.tau = 1, 2, 7
stepsize = fixed:0.05
seeds = 4
horizon.iterations = 60
)";

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Config, ParsesFullExample) {
  const auto cfg = parse_config_text(R"(# comment
problem.kind = softmax
problem.dimension = 6
problem.classes = 3
problem.alpha = inf
algorithm = ringleader, minibatch  # trailing comment
workers.n = 2
workers.tau = 1, 3
stepsize = sweep:0.01, 0.1
seeds = 1..3, 7
horizon.time_budget = 50
plot.window = 4
)");
  EXPECT_EQ(cfg.problem.kind, ProblemKind::Softmax);
  EXPECT_TRUE(std::isinf(cfg.problem.alpha));
  EXPECT_EQ(cfg.algorithms, (std::vector<Algorithm>{Algorithm::Ringleader, Algorithm::Minibatch}));
  EXPECT_EQ(cfg.workers.taus, (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(cfg.stepsize.policy, StepsizePolicy::Sweep);
  EXPECT_EQ(cfg.stepsize.values, (std::vector<double>{0.01, 0.1}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3, 7}));
  EXPECT_EQ(cfg.horizon.time_budget, 50.0);
  EXPECT_EQ(cfg.window, 4u);
  EXPECT_EQ(cfg.entries.size(), 11u);
}

TEST(Config, StepsizeDefaultsToTheStandardGrid) {
  const auto cfg = parse_config_text("problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 1\nworkers.tau = 1\n");
  EXPECT_EQ(cfg.stepsize.policy, StepsizePolicy::Sweep);
  EXPECT_EQ(cfg.stepsize.values.size(), 10u);
  EXPECT_EQ(cfg.stepsize.values.front(), 0.001);
  EXPECT_EQ(cfg.stepsize.values.back(), 2.0);
}

TEST(Config, RejectsMalformedInput) {
  const std::string base = "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 2\nstepsize = theory\n";
  const std::vector<std::string> bad{
      base + "workers.tau = 1\n",
      base + "workers.tau = 1, 2\nworkers.tau_generator = shifted-normal\n",
      base,
      base + "workers.tau = 1, 0\n",
      base + "workers.tau = 1, 2\nbogus = 3\n",
      base + "workers.tau = 1, 2\nworkers.tau = 1, 2\n",
      base + "workers.tau = 1, 2\nseeds = 5..2\n",
      base + "workers.tau = 1, 2\nepsilon = -1\n",
      base + "workers.tau = 1, 2\nepsilon = nan\n",
      base + "workers.tau = 1, two\n",
      "algorithm = ringleader\nworkers.n = 1\nworkers.tau = 1\n",
      "problem.kind = cubic\nalgorithm = ringleader\nworkers.n = 1\nworkers.tau = 1\n",
      "problem.kind = quadratic\nalgorithm = hogwild\nworkers.n = 1\nworkers.tau = 1\n",
      "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 3\nworkers.roleswitch = 8, 1\n",
      "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 0\nworkers.tau = 1\n",
      "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 1\nworkers.tau = 1\nstepsize = sweep:0.1,-1\n",
      "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 1\nworkers.tau = 1\nstepsize = adaptive\n",
      "problem.kind = quadratic\nno equals sign\n",
  };
  for (const auto& text : bad) EXPECT_THROW(parse_config_text(text), ConfigurationError) << text;
}

TEST(Config, PowerProfilesAndRoleSwitch) {
  const auto p = parse_config_text(R"(problem.kind = quadratic
algorithm = ringleader-universal
workers.n = 2
workers.power.0 = 0:1, 5:0.25
workers.power.1 = 0:0.5
stepsize = fixed:0.1
horizon.iterations = 5
)");
  ASSERT_EQ(p.workers.source, WorkerSource::Power);
  ASSERT_EQ(p.workers.power[0].size(), 2u);
  EXPECT_EQ(p.workers.power[0][1].start, 5.0);
  EXPECT_EQ(p.workers.power[0][1].power, 0.25);
  const auto r = parse_config_text(
      "problem.kind = quadratic\nalgorithm = ringleader\nworkers.n = 2\nworkers.roleswitch = 8, 0.5, 20\n");
  EXPECT_EQ(r.workers.source, WorkerSource::RoleSwitch);
  EXPECT_EQ(r.workers.roleswitch_s, 8u);
  EXPECT_EQ(r.workers.roleswitch_base_tau, 0.5);
  EXPECT_EQ(r.workers.roleswitch_periods, 20u);
}

TEST(Config, GeneratedTausFollowTheShiftedNormalModel) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto taus = generated_taus(8, seed);
    ASSERT_EQ(taus.size(), 8u);
    for (std::size_t i = 0; i < taus.size(); ++i) EXPECT_GE(taus[i], static_cast<double>(i + 1));
    EXPECT_EQ(taus, generated_taus(8, seed));
  }
  EXPECT_NE(generated_taus(8, 1), generated_taus(8, 2));
}

TEST(Aggregate, QuantilesAndStepSeries) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_EQ(quantile({0.0, 10.0}, 0.25), 2.5);
  EXPECT_TRUE(std::isinf(median({1.0, std::nan(""), std::nan("")})));
  StepSeries s{{1.0, 3.0}, {5.0, 2.0}, 9.0};
  EXPECT_EQ(s.at(0.0), 9.0);
  EXPECT_EQ(s.at(1.0), 5.0);
  EXPECT_EQ(s.at(2.9), 5.0);
  EXPECT_EQ(s.at(3.0), 2.0);
  const std::vector<StepSeries> seeds{s, StepSeries{{2.0}, {1.0}, 7.0}, StepSeries{{}, {}, 4.0}};
  const auto band = aggregate(seeds, {0.0, 2.0, 3.0});
  EXPECT_EQ(band.median, (std::vector<double>{7.0, 4.0, 2.0}));
}

TEST(Smoothing, WindowOneIsIdentity) {
  const std::vector<double> y{5, 1, 4, 1, 5, 9};
  EXPECT_EQ(smooth(y, 1), y);
}

TEST(Smoothing, CenteredMeanWithTruncatedEndsAndRawStart) {
  const std::vector<double> y{100, 2, 4, 6, 8, 10};
  const auto s = smooth(y, 3);
  EXPECT_EQ(s[0], 100.0);
  EXPECT_DOUBLE_EQ(s[1], (100.0 + 2 + 4) / 3);
  EXPECT_DOUBLE_EQ(s[2], (2.0 + 4 + 6) / 3);
  EXPECT_DOUBLE_EQ(s[4], (6.0 + 8 + 10) / 3);
  EXPECT_DOUBLE_EQ(s[5], (8.0 + 10) / 2);
  const auto e = smooth(y, 4);
  EXPECT_DOUBLE_EQ(e[2], (2.0 + 4 + 6 + 8) / 4);
  EXPECT_DOUBLE_EQ(e[5], (8.0 + 10) / 2);
  EXPECT_THROW(smooth(y, 0), ConfigurationError);
}

TEST(Smoothing, ConstantSignalIsUnchanged) {
  for (std::size_t w = 1; w <= 9; ++w) {
    const std::vector<double> y(17, 3.25);
    EXPECT_EQ(smooth(y, w), y) << w;
  }
}

TEST(Cli, MinimalRunWritesOneTraceMetadataAndAudit) {
  const auto dir = scratch("minimal");
  const auto cfg = write_config(dir, kMinimal);
  const auto r = cli({"run", cfg.string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto run = dir / "out" / "ringleader" / "gamma-0.1" / "seed-0";
  for (const char* f : {"trace.csv", "workers.csv", "events.csv", "metadata.json", "audit.txt"})
    EXPECT_TRUE(fs::exists(run / f)) << f;
  const auto csv = read_file(run / "trace.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "iteration,virtual_time,grad_norm_sq,B_k,max_delay,updates_this_round,discarded_events");
  EXPECT_EQ(line_count(csv), 11u);
  EXPECT_EQ(find_trace_dirs(dir / "out").size(), 1u);
}

TEST(Cli, MetadataCarriesEveryTheoryConstant) {
  const auto dir = scratch("metadata");
  const auto cfg = write_config(dir, R"(problem.kind = quadratic
problem.dimension = 4
problem.sigma_sq = 0
algorithm = ringleader
workers.n = 3
workers.tau = 1, 2, 4
stepsize = theory
epsilon = 0.1
)");
  ASSERT_EQ(cli({"run", cfg.string(), "--out-dir", (dir / "out").string()}).code, 0);
  const auto m = json::parse(read_file(dir / "out" / "ringleader" / "gamma-theory" / "seed-0" / "metadata.json"));
  for (const char* key : {"gamma", "sigma_sq", "epsilon", "B_lower", "workers", "tau_avg", "tau_n",
                          "predicted_iterations", "config", "fingerprint"})
    EXPECT_TRUE(m.contains(key)) << key;
  for (const char* key : {"L_f", "L_bound", "L_max", "sigma_sq", "delta"}) EXPECT_TRUE(m["problem"].contains(key)) << key;
  const double L = m["problem"]["L_bound"].get<double>();
  const double gamma = theory_stepsize(3, L, m["sigma_sq"].get<double>(), m["epsilon"].get<double>(),
                                       m["B_lower"].get<double>(), ComputeModel::Fixed);
  EXPECT_EQ(m["gamma"].get<double>(), gamma);
  EXPECT_EQ(m["tau_n"].get<double>(), 4.0);
  EXPECT_DOUBLE_EQ(m["tau_avg"].get<double>(), 7.0 / 3.0);
  EXPECT_EQ(m["B_lower"].get<double>(), std::max(1.0, 4.0 / (2.0 * 7.0 / 3.0)));
}

TEST(Cli, ForgedDelayFailsAuditWithWitness) {
  const auto dir = scratch("forged");
  const auto cfg = write_config(dir, kThreeWorkers);
  ASSERT_EQ(cli({"run", cfg.string(), "--out-dir", (dir / "out").string()}).code, 0);
  const auto run = dir / "out" / "ringleader" / "gamma-0.05" / "seed-4";
  ASSERT_EQ(cli({"audit", (dir / "out").string()}).code, 0);

  auto text = read_file(run / "workers.csv");
  const std::string row = "\n20,1,";
  const auto pos = text.find(row);
  ASSERT_NE(pos, std::string::npos);
  const auto end = text.find(',', pos + row.size());
  text.replace(pos + row.size(), end - pos - row.size(), "5");
  write_file(run / "workers.csv", text);

  const auto r = cli({"audit", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("delay-bound\tfail"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("witness #20"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("fingerprint\tfail"), std::string::npos) << r.out;
}

TEST(Cli, TamperedTraceFailsFingerprint) {
  const auto dir = scratch("tampered");
  const auto cfg = write_config(dir, kMinimal);
  ASSERT_EQ(cli({"run", cfg.string(), "--out-dir", (dir / "out").string()}).code, 0);
  const auto trace = dir / "out" / "ringleader" / "gamma-0.1" / "seed-0" / "trace.csv";
  auto text = read_file(trace);
  text.back() = ' ';
  text += "\n";
  write_file(trace, text);
  const auto r = cli({"audit", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("fingerprint\tfail"), std::string::npos) << r.out;
}

TEST(Cli, RerunsAreByteIdentical) {
  const auto dir = scratch("rerun");
  const auto cfg = write_config(dir, kThreeWorkers);
  ASSERT_EQ(cli({"run", cfg.string(), "--seeds", "1..3", "--out-dir", (dir / "a").string()}).code, 0);
  ASSERT_EQ(cli({"run", cfg.string(), "--seeds", "1..3", "--jobs", "3", "--out-dir", (dir / "b").string()}).code, 0);
  const auto dirs = find_trace_dirs(dir / "a");
  ASSERT_EQ(dirs.size(), 3u);
  for (const auto& a : dirs) {
    const auto b = dir / "b" / fs::relative(a, dir / "a");
    for (const char* f : {"trace.csv", "workers.csv", "events.csv", "metadata.json", "audit.txt"})
      EXPECT_EQ(read_file(a / f), read_file(b / f)) << a << " " << f;
  }
  EXPECT_NE(read_file(dirs[0] / "trace.csv"), read_file(dirs[1] / "trace.csv"));
}

TEST(Cli, SingleGammaSweepMatchesRun) {
  const auto dir = scratch("single-sweep");
  const std::string body = R"(problem.kind = quadratic
problem.dimension = 6
problem.sigma_sq = 1
algorithm = ringleader, minibatch
workers.n = 4
workers.tau_generator = shifted-normal
seeds = 1, 2
horizon.time_budget = 40
)";
  write_file(dir / "run.cfg", body + "stepsize = fixed:0.05\n");
  write_file(dir / "sweep.cfg", body + "stepsize = sweep:0.05\n");
  ASSERT_EQ(cli({"run", (dir / "run.cfg").string(), "--out-dir", (dir / "run").string()}).code, 0);
  const auto s = cli({"sweep", (dir / "sweep.cfg").string(), "--out-dir", (dir / "sweep").string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto runs = find_trace_dirs(dir / "run");
  ASSERT_EQ(runs.size(), 4u);
  for (const auto& a : runs) {
    const auto b = dir / "sweep" / fs::relative(a, dir / "run");
    for (const char* f : {"trace.csv", "workers.csv", "events.csv"}) EXPECT_EQ(read_file(a / f), read_file(b / f));
  }
  const auto best = read_file(dir / "sweep" / "best.csv");
  EXPECT_EQ(line_count(best), 3u);
  EXPECT_NE(best.find("ringleader,0.05,"), std::string::npos);
}

TEST(Cli, SweepTableHasOneRowPerGammaAndTheTheoryGammaRowConverges) {
  const auto dir = scratch("sweep");
  const auto cfg = write_config(dir, R"(problem.kind = quadratic
problem.dimension = 6
problem.sigma_sq = 0
problem.seed = 2
algorithm = ringleader
workers.n = 3
workers.tau = 1, 2, 3
seeds = 1..3
horizon.time_budget = 300
plot.window = 3
)");
  const auto r = cli({"sweep", cfg.string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream table(read_file(dir / "out" / "sweep.csv"));
  std::string line;
  std::getline(table, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(table, line)) {
    const auto cells = cli::detail::split(line, ',');
    rows.emplace_back(std::stod(cells[1]), std::stod(cells[2]));
  }
  ASSERT_EQ(rows.size(), kDefaultStepsizeGrid.size());

  const auto parsed = parse_config_text(read_file(cfg));
  const auto ps = summarize(build_problem(parsed));
  const double theory = theory_stepsize(3, ps.constants.L_bound, 0.0, 1e-3, 1.0, ComputeModel::Fixed);
  const auto above = std::find_if(rows.begin(), rows.end(), [&](const auto& row) { return row.first >= theory; });
  ASSERT_NE(above, rows.end());
  EXPECT_LT(above->second, 1e-3);
}

TEST(Cli, SweepWhereEveryGammaDivergesExitsTwo) {
  const auto dir = scratch("diverge");
  const auto cfg = write_config(dir, R"(problem.kind = quadratic
problem.dimension = 4
problem.heterogeneity = 3
algorithm = minibatch
workers.n = 2
workers.tau = 1, 1
stepsize = sweep:1e6, 1e8
horizon.time_budget = 2000
)");
  const auto r = cli({"sweep", cfg.string(), "--out-dir", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("every stepsize diverged"), std::string::npos) << r.out;
}

TEST(Cli, SweepNeedsATimeBudget) {
  const auto dir = scratch("no-budget");
  const auto cfg = write_config(dir, kMinimal);
  const auto r = cli({"sweep", cfg.string(), "--out-dir", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("time_budget"), std::string::npos);
}

TEST(Cli, ConfigErrorsExitOne) {
  const auto dir = scratch("config-errors");
  EXPECT_EQ(cli({"run", (dir / "missing.cfg").string(), "--out-dir", dir.string()}).code, 1);
  const auto cfg = write_config(dir, std::string(kMinimal) + "mystery = 1\n");
  const auto r = cli({"run", cfg.string(), "--out-dir", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("mystery"), std::string::npos);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"run", cfg.string(), "--jobs", "0"}).code, 1);
  EXPECT_EQ(cli({"audit", (dir / "nowhere").string()}).code, 1);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, OutDirDefaultsToEnvironment) {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, kMinimal);
  ::setenv("RINGLEADER_OUT_DIR", (dir / "from-env").string().c_str(), 1);
  const auto r = cli({"run", cfg.string()});
  ::unsetenv("RINGLEADER_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "from-env" / "ringleader" / "gamma-0.1" / "seed-0" / "trace.csv"));
}

TEST(Cli, PlotSkipsEmptyTracesAndDrawsOneBandPerMethod) {
  const auto dir = scratch("plot");
  const auto cfg = write_config(dir, kThreeWorkers);
  ASSERT_EQ(cli({"run", cfg.string(), "--seeds", "1..4", "--out-dir", (dir / "out").string()}).code, 0);
  const auto empty = write_config(dir, R"(problem.kind = quadratic
algorithm = malenia
workers.n = 1
workers.tau = 5
stepsize = fixed:0.1
epsilon = 0.1
horizon.time_budget = 1
)");
  ASSERT_EQ(cli({"run", empty.string(), "--out-dir", (dir / "out").string()}).code, 0);
  const auto r = cli({"plot", (dir / "out").string(), "--window", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("skipping empty trace"), std::string::npos);
  const auto svg = read_file(dir / "out" / "plot.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  auto count = [&](const std::string& what) {
    std::size_t c = 0;
    for (auto p = svg.find(what); p != std::string::npos; p = svg.find(what, p + 1)) ++c;
    return c;
  };
  EXPECT_EQ(count("<polygon"), 1u);
  EXPECT_EQ(count("<polyline"), 1u);
  EXPECT_NE(svg.find("ringleader gamma=0.05"), std::string::npos);
}

TEST(Cli, PartitionDemoConservesSamples) {
  const auto dir = scratch("partition");
  const auto cfg = write_config(dir, R"(problem.kind = softmax
problem.classes = 5
problem.alpha = 0.1
problem.samples_per_client = 30
workers.n = 7
)");
  const auto r = cli({"partition-demo", cfg.string(), "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(read_file(dir / "partition.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "client,class_0,class_1,class_2,class_3,class_4,total");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    const auto cells = cli::detail::split(line, ',');
    std::size_t sum = 0;
    for (std::size_t j = 1; j + 1 < cells.size(); ++j) sum += std::stoul(cells[j]);
    EXPECT_EQ(sum, 30u);
    EXPECT_EQ(std::stoul(cells.back()), 30u);
    ++rows;
  }
  EXPECT_EQ(rows, 7u);
  EXPECT_NE(r.out.find("kept=210"), std::string::npos) << r.out;
}

TEST(Cli, TheoryRunPassesConvergenceAudit) {
  const auto dir = scratch("theory");
  const auto cfg = write_config(dir, R"(problem.kind = quadratic
problem.dimension = 5
problem.sigma_sq = 0
algorithm = ringleader
workers.n = 2
workers.tau = 1, 3
stepsize = theory
epsilon = 0.1
)");
  const auto r = cli({"run", cfg.string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto audit = read_file(dir / "out" / "audit.txt");
  EXPECT_NE(audit.find("convergence\tpass"), std::string::npos) << audit;
}

TEST(Cli, ReplayAuditRunsWhenRequested) {
  const auto dir = scratch("replay");
  const auto cfg = write_config(dir, std::string(kThreeWorkers) + "audit.replay = true\n");
  const auto r = cli({"run", cfg.string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(read_file(dir / "out" / "audit.txt").find("shadow-replay\tpass"), std::string::npos);
}

}  // namespace
