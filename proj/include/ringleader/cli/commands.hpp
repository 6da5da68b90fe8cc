#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringleader/audit/checks.hpp"
#include "ringleader/audit/replay.hpp"
#include "ringleader/cli/aggregate.hpp"
#include "ringleader/cli/config.hpp"
#include "ringleader/cli/experiment.hpp"
#include "ringleader/cli/svg.hpp"
#include "ringleader/cli/trace_io.hpp"
#include "ringleader/problems/partition.hpp"

namespace ringleader::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFailure = 2;

inline constexpr std::size_t kSweepGridPoints = 201;

struct Options {
  fs::path out_dir = "ringleader-out";
  std::size_t jobs = 1;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::size_t window = 1;
};

inline std::string gamma_label(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", gamma);
  return buf;
}

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string fingerprint(const std::string& trace_csv, const std::string& workers_csv) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(workers_csv, fnv1a(trace_csv))));
  return buf;
}

// Audit time comparisons allow for rounding in the accumulated clock.
inline double time_slack(const std::vector<IterationRecord>& records) {
  return 1e-11 * std::max(1.0, records.empty() ? 0.0 : records.back().time);
}

inline StepSeries step_series(const std::vector<IterationRecord>& records, double final_grad_norm_sq) {
  StepSeries s;
  s.initial = records.empty() ? final_grad_norm_sq : records.front().grad_norm_sq;
  for (std::size_t k = 0; k < records.size(); ++k) {
    s.times.push_back(records[k].time);
    s.after.push_back(k + 1 < records.size() ? records[k + 1].grad_norm_sq : final_grad_norm_sq);
  }
  return s;
}

// Runs fn(0..count-1) on up to `jobs` threads; the first exception wins.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct RunTask {
  Algorithm algorithm = Algorithm::Ringleader;
  std::optional<double> gamma;  // empty under the theory policy
  std::uint64_t seed = 0;
  std::string gamma_dir;
};

struct RunOutcome {
  RunTask task;
  fs::path dir;
  double gamma = 0.0;
  double sigma_sq = 0.0;
  std::optional<std::uint64_t> predicted_K;
  std::uint64_t iterations = 0;
  RunEnd end = RunEnd::Iterations;
  double final_grad_norm_sq = 0.0;
  audit::AuditReport report;
  StepSeries series;
  std::optional<audit::RunTrace> trace;  // kept for the ensemble check
};

inline std::vector<RunTask> make_tasks(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  std::vector<RunTask> tasks;
  for (Algorithm a : cfg.algorithms) {
    std::vector<std::optional<double>> gammas;
    if (cfg.stepsize.policy == StepsizePolicy::Theory) {
      gammas.push_back(std::nullopt);
    } else {
      for (double g : cfg.stepsize.values) gammas.push_back(g);
    }
    for (const auto& g : gammas)
      for (std::uint64_t s : seeds)
        tasks.push_back({a, g, s, g ? "gamma-" + gamma_label(*g) : "gamma-theory"});
  }
  return tasks;
}

inline json metadata_json(const RunConfig& cfg, const ProblemSummary& ps, const RunPlan& plan, const RunResult& run,
                          const std::string& fp) {
  json m;
  m["algorithm"] = std::string(to_string(plan.algorithm));
  m["gamma"] = plan.gamma;
  m["seed"] = plan.seed;
  m["workers"] = ps.n;
  m["taus"] = plan.taus ? json(*plan.taus) : json(nullptr);
  if (plan.taus) {
    m["tau_avg"] = tau_mean(*plan.taus);
    m["tau_n"] = tau_max(*plan.taus);
  }
  m["compute_model"] = plan.taus ? "fixed" : "universal";
  m["problem"] = {{"kind", cfg.problem.kind == ProblemKind::Quadratic ? "quadratic" : "softmax"},
                  {"dimension", ps.dimension},
                  {"L_f", ps.constants.L_f},
                  {"L_bound", ps.constants.L_bound},
                  {"L_max", ps.constants.L_max},
                  {"L_exact", ps.constants.exact},
                  {"sigma_sq", ps.sigma_sq},
                  {"sigma_sq_is_estimate", ps.sigma_sq_is_estimate},
                  {"delta", ps.delta}};
  m["sigma_sq"] = plan.sigma_sq;
  m["epsilon"] = plan.epsilon ? json(*plan.epsilon) : json(nullptr);
  m["B_lower"] = plan.B_lower;
  m["predicted_iterations"] = plan.predicted_K ? json(*plan.predicted_K) : json(nullptr);
  m["stepsize_policy"] = cfg.stepsize.policy == StepsizePolicy::Theory  ? "theory"
                         : cfg.stepsize.policy == StepsizePolicy::Fixed ? "fixed"
                                                                        : "sweep";
  json h;
  h["iterations"] = plan.horizon.iterations ? json(*plan.horizon.iterations) : json(nullptr);
  h["time_budget"] = plan.horizon.time_budget ? json(*plan.horizon.time_budget) : json(nullptr);
  h["target"] = plan.horizon.target ? json(*plan.horizon.target) : json(nullptr);
  m["horizon"] = h;
  m["end"] = std::string(to_string(run.end));
  m["iterations"] = run.records.size();
  m["end_time"] = run.events.end_time;
  m["events_delivered"] = run.events.events_delivered;
  json d = json::object();
  for (std::size_t i = 0; i < kDispositionCount; ++i) {
    d[std::string(to_string(static_cast<Disposition>(i)))] = run.events.disposition_counts[i];
  }
  m["dispositions"] = d;
  m["discarded_computations"] = run.events.discarded_computations;
  m["initial_grad_norm_sq"] = run.initial_grad_norm_sq;
  m["final_grad_norm_sq"] = run.final_grad_norm_sq;
  json entries = json::array();
  for (const auto& [k, v] : cfg.entries) entries.push_back({k, v});
  m["config"] = entries;
  m["fingerprint"] = fp;
  return m;
}

inline bool checks_convergence(const RunConfig& cfg, const RunPlan& plan) {
  return cfg.stepsize.policy == StepsizePolicy::Theory && plan.algorithm == Algorithm::Ringleader &&
         plan.predicted_K.has_value() && plan.epsilon.has_value();
}

inline RunOutcome execute_task(const RunConfig& cfg, const AnyProblem& problem, const ProblemSummary& ps,
                               const RunTask& task, const fs::path& out_dir) {
  RunOutcome o;
  o.task = task;
  const RunPlan plan = plan_run(cfg, ps, task.algorithm, task.gamma, task.seed);
  const RunResult run = execute(problem, plan, cfg.replay);
  o.gamma = plan.gamma;
  o.sigma_sq = plan.sigma_sq;
  o.predicted_K = plan.predicted_K;
  o.iterations = run.records.size();
  o.end = run.end;
  o.final_grad_norm_sq = run.final_grad_norm_sq;
  o.series = step_series(run.records, run.final_grad_norm_sq);

  std::ostringstream trace_csv, workers_csv, events_csv;
  write_trace_csv(trace_csv, run.records);
  write_workers_csv(workers_csv, run.records);
  write_events_csv(events_csv, run.events.log);
  const std::string fp = fingerprint(trace_csv.str(), workers_csv.str());

  auto trace = audit::make_trace(run, plan.profiles, fp);
  o.report = audit::audit_trace(trace, time_slack(run.records));
  if (cfg.replay) {
    o.report.add(std::visit([&](const auto& p) { return audit::check_shadow_replay(p, run); }, problem));
  }
  if (checks_convergence(cfg, plan)) {
    if (plan.sigma_sq == 0.0) o.report.add(audit::check_convergence(trace, *plan.epsilon, *plan.predicted_K));
    o.trace = std::move(trace);
  }

  o.dir = out_dir / std::string(to_string(task.algorithm)) / task.gamma_dir / ("seed-" + std::to_string(task.seed));
  fs::create_directories(o.dir);
  write_file(o.dir / "trace.csv", trace_csv.str());
  write_file(o.dir / "workers.csv", workers_csv.str());
  write_file(o.dir / "events.csv", events_csv.str());
  write_file(o.dir / "metadata.json", metadata_json(cfg, ps, plan, run, fp).dump(2) + "\n");
  std::ostringstream audit_txt;
  o.report.write(audit_txt);
  write_file(o.dir / "audit.txt", audit_txt.str());
  return o;
}

struct SweepRow {
  Algorithm algorithm = Algorithm::Ringleader;
  std::string gamma;
  double final_median = 0.0;
  double final_q25 = 0.0;
  double final_q75 = 0.0;
  std::size_t diverged = 0;
  std::size_t seeds = 0;
};

// Per (method, gamma): median over seeds on a uniform time grid, smoothed,
// read at the budget.
inline std::vector<SweepRow> summarize_sweep(const std::vector<RunOutcome>& outcomes, VirtualTime budget,
                                             std::size_t window) {
  std::map<std::pair<Algorithm, std::string>, std::vector<const RunOutcome*>> groups;
  std::vector<std::pair<Algorithm, std::string>> order;
  for (const auto& o : outcomes) {
    const auto key = std::make_pair(o.task.algorithm, o.task.gamma_dir);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&o);
  }
  const auto grid = uniform_grid(budget, kSweepGridPoints);
  std::vector<SweepRow> rows;
  for (const auto& key : order) {
    std::vector<StepSeries> series;
    SweepRow row;
    row.algorithm = key.first;
    row.gamma = key.second.substr(std::string("gamma-").size());
    for (const auto* o : groups[key]) {
      series.push_back(o->series);
      if (o->end == RunEnd::Diverged) ++row.diverged;
    }
    row.seeds = series.size();
    const Band band = smooth(aggregate(series, grid), window);
    row.final_median = band.median.back();
    row.final_q25 = band.q25.back();
    row.final_q75 = band.q75.back();
    rows.push_back(row);
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "algorithm,gamma,final_median,final_q25,final_q75,diverged_seeds,seeds\n";
  for (const auto& r : rows) {
    os << to_string(r.algorithm) << ',' << r.gamma << ',' << fmt(r.final_median) << ',' << fmt(r.final_q25) << ','
       << fmt(r.final_q75) << ',' << r.diverged << ',' << r.seeds << '\n';
  }
  return os.str();
}

// Lowest finite final median per method, in config order; methods with no
// finite row are returned in `all_diverged`.
inline std::vector<SweepRow> best_rows(const std::vector<SweepRow>& rows, std::vector<Algorithm>* all_diverged) {
  std::vector<SweepRow> best;
  std::vector<Algorithm> seen;
  for (const auto& r : rows)
    if (std::find(seen.begin(), seen.end(), r.algorithm) == seen.end()) seen.push_back(r.algorithm);
  for (Algorithm a : seen) {
    const SweepRow* pick = nullptr;
    for (const auto& r : rows) {
      if (r.algorithm != a || !std::isfinite(r.final_median)) continue;
      if (!pick || r.final_median < pick->final_median) pick = &r;
    }
    if (pick) {
      best.push_back(*pick);
    } else if (all_diverged) {
      all_diverged->push_back(a);
    }
  }
  return best;
}

inline std::vector<std::uint64_t> resolve_seeds(const RunConfig& cfg, const Options& opt) {
  if (opt.seeds) return *opt.seeds;
  if (!cfg.seeds.empty()) return cfg.seeds;
  return {0};
}

struct Execution {
  std::vector<RunOutcome> outcomes;
  bool audit_failed = false;
};

inline Execution execute_config(const RunConfig& cfg, const Options& opt, std::ostream& out) {
  const auto seeds = resolve_seeds(cfg, opt);
  const AnyProblem problem = build_problem(cfg);
  const ProblemSummary ps = summarize(problem);
  const auto tasks = make_tasks(cfg, seeds);
  Execution ex;
  ex.outcomes.resize(tasks.size());
  fs::create_directories(opt.out_dir);
  parallel_for(tasks.size(), opt.jobs,
               [&](std::size_t i) { ex.outcomes[i] = execute_task(cfg, problem, ps, tasks[i], opt.out_dir); });

  audit::AuditReport summary;
  std::ostringstream all;
  for (const auto& o : ex.outcomes) {
    const bool failed = o.report.any_failed();
    ex.audit_failed = ex.audit_failed || failed;
    out << to_string(o.task.algorithm) << " gamma=" << gamma_label(o.gamma) << " seed=" << o.task.seed
        << " iterations=" << o.iterations << " end=" << to_string(o.end)
        << " final_grad_norm_sq=" << fmt(o.final_grad_norm_sq) << " audit=" << (failed ? "FAIL" : "ok") << '\n';
    const auto rel = fs::relative(o.dir, opt.out_dir).generic_string();
    for (const auto& c : o.report.checks) {
      all << rel << '\t' << audit::format_line(c) << '\n';
      if (c.failed()) out << "  " << audit::format_line(c) << '\n';
    }
  }

  // Seed-averaged criterion for noisy theory runs.
  std::map<Algorithm, std::vector<audit::RunTrace>> ensembles;
  std::map<Algorithm, const RunOutcome*> first;
  for (const auto& o : ex.outcomes) {
    if (!o.trace || o.sigma_sq == 0.0) continue;
    ensembles[o.task.algorithm].push_back(*o.trace);
    first.emplace(o.task.algorithm, &o);
  }
  for (const auto& [a, traces] : ensembles) {
    if (traces.size() < 2) continue;
    auto r = audit::check_convergence_ensemble(traces, *cfg.epsilon, *first[a]->predicted_K);
    r.name = std::string(to_string(a)) + "/convergence-ensemble";
    out << audit::format_line(r) << '\n';
    all << "." << '\t' << audit::format_line(r) << '\n';
    ex.audit_failed = ex.audit_failed || r.failed();
  }
  write_file(opt.out_dir / "audit.txt", all.str());
  return ex;
}

inline void report_sweep(const RunConfig& cfg, const Options& opt, const Execution& ex, std::ostream& out,
                         std::vector<Algorithm>* all_diverged) {
  const auto rows = summarize_sweep(ex.outcomes, *cfg.horizon.time_budget, cfg.window);
  const auto best = best_rows(rows, all_diverged);
  write_file(opt.out_dir / "sweep.csv", sweep_csv(rows));
  std::ostringstream bc;
  bc << "algorithm,gamma,final_median\n";
  for (const auto& r : best) bc << to_string(r.algorithm) << ',' << r.gamma << ',' << fmt(r.final_median) << '\n';
  write_file(opt.out_dir / "best.csv", bc.str());
  out << "best stepsize per method (smoothed median ||grad f||^2 at t=" << fmt(*cfg.horizon.time_budget) << "):\n";
  for (const auto& r : best) out << "  " << to_string(r.algorithm) << " gamma=" << r.gamma << " " << fmt(r.final_median) << '\n';
  if (all_diverged) {
    for (Algorithm a : *all_diverged) out << "  " << to_string(a) << ": every stepsize diverged\n";
  }
}

inline int cmd_run(const std::string& config_path, const Options& opt, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  const auto ex = execute_config(cfg, opt, out);
  if (cfg.stepsize.policy == StepsizePolicy::Sweep && cfg.horizon.time_budget) {
    report_sweep(cfg, opt, ex, out, nullptr);
  }
  out << "wrote " << ex.outcomes.size() << " run(s) to " << opt.out_dir.string() << '\n';
  return ex.audit_failed ? kExitFailure : kExitOk;
}

inline int cmd_sweep(const std::string& config_path, const Options& opt, std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  if (!cfg.horizon.time_budget) throw ConfigurationError("sweep needs horizon.time_budget");
  const auto ex = execute_config(cfg, opt, out);
  std::vector<Algorithm> all_diverged;
  report_sweep(cfg, opt, ex, out, &all_diverged);
  return ex.audit_failed || !all_diverged.empty() ? kExitFailure : kExitOk;
}

inline audit::CheckResult check_fingerprint(const fs::path& dir, const std::string& recorded) {
  audit::CheckResult r;
  r.name = "fingerprint";
  if (recorded.empty()) return audit::not_applicable(r.name, "metadata has no fingerprint");
  const std::string got = fingerprint(read_file(dir / "trace.csv"), read_file(dir / "workers.csv"));
  r.visited = 1;
  r.detail = "recorded " + recorded;
  if (got != recorded) r.violate(0, "trace files hash to " + got);
  return r;
}

inline int cmd_audit(const fs::path& root, std::ostream& out) {
  const auto dirs = find_trace_dirs(root);
  if (dirs.empty()) throw ConfigurationError("no trace directories under '" + root.string() + "'");
  bool failed = false;
  for (const auto& dir : dirs) {
    const auto files = load_trace_dir(dir);
    auto report = audit::audit_trace(files.trace, time_slack(files.trace.records));
    report.add(check_fingerprint(dir, files.trace.fingerprint));
    const auto rel = fs::relative(dir, root).generic_string();
    for (const auto& c : report.checks) out << rel << '\t' << audit::format_line(c) << '\n';
    failed = failed || report.any_failed();
  }
  out << dirs.size() << " trace(s) audited, " << (failed ? "FAILED" : "all checks passed") << '\n';
  return failed ? kExitFailure : kExitOk;
}

inline int cmd_plot(const fs::path& root, std::size_t window, std::ostream& out, std::ostream& err) {
  if (window < 1) throw ConfigurationError("--window must be >= 1");
  const auto dirs = find_trace_dirs(root);
  std::map<std::string, std::vector<StepSeries>> groups;
  std::vector<std::string> order;
  VirtualTime end = 0.0;
  for (const auto& dir : dirs) {
    const auto files = load_trace_dir(dir);
    if (files.trace.records.empty()) {
      err << "skipping empty trace " << dir.string() << '\n';
      continue;
    }
    const auto& m = files.metadata;
    std::string label = m.at("algorithm").get<std::string>();
    if (m.value("stepsize_policy", "") == "theory") {
      label += " theory";
    } else if (m.contains("gamma")) {
      label += " gamma=" + gamma_label(m.at("gamma").get<double>());
    }
    if (!groups.count(label)) order.push_back(label);
    groups[label].push_back(step_series(files.trace.records, files.final_grad_norm_sq));
    end = std::max(end, files.trace.records.back().time);
  }
  if (order.empty()) throw ConfigurationError("no non-empty traces under '" + root.string() + "'");
  const auto grid = uniform_grid(end, kSweepGridPoints);
  std::vector<PlotSeries> series;
  for (const auto& label : order) series.push_back({label, smooth(aggregate(groups[label], grid), window)});
  const fs::path target = root / "plot.svg";
  write_file(target, render_svg(series, "median ||grad f||^2 with interquartile range"));
  out << "wrote " << target.string() << " (" << order.size() << " series, window " << window << ")\n";
  return kExitOk;
}

inline int cmd_partition_demo(const std::string& config_path, const Options& opt, std::ostream& out) {
  const auto c = load_partition_config(config_path);
  const std::size_t total = c.clients * c.samples_per_client + (c.clients - 1);
  Rng rng(stream_key(c.seed, 0xDE30ULL));
  std::vector<std::size_t> labels(total);
  for (auto& l : labels) l = static_cast<std::size_t>(rng.below(c.classes));
  const auto part = dirichlet_partition(labels, c.classes, c.clients, c.alpha, c.seed);

  std::ostringstream csv;
  csv << "client";
  for (std::size_t j = 0; j < c.classes; ++j) csv << ",class_" << j;
  csv << ",total\n";
  out << "clients=" << c.clients << " classes=" << c.classes << " alpha=" << fmt(c.alpha) << " samples=" << total
      << " kept=" << part.trimmed_size << " per_client=" << part.per_client() << '\n';
  for (std::size_t i = 0; i < c.clients; ++i) {
    csv << i;
    out << "client " << i << ':';
    std::size_t sum = 0;
    for (std::size_t j = 0; j < c.classes; ++j) {
      csv << ',' << part.class_counts[i][j];
      out << ' ' << part.class_counts[i][j];
      sum += part.class_counts[i][j];
    }
    csv << ',' << sum << '\n';
    out << " (" << sum << ")\n";
  }
  fs::create_directories(opt.out_dir);
  write_file(opt.out_dir / "partition.csv", csv.str());
  out << "wrote " << (opt.out_dir / "partition.csv").string() << '\n';
  return kExitOk;
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Virtual-time simulator for asynchronous distributed SGD"};
  app.require_subcommand(1);
  Options opt;
  std::string out_dir = "ringleader-out";
  std::string seeds;
  app.add_option("--out-dir", out_dir, "Output directory")->envname("RINGLEADER_OUT_DIR");
  app.add_option("--seeds", seeds, "Seed list overriding the config, e.g. 1..10 or 1,4,9");
  app.add_option("--jobs", opt.jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  std::string config, trace_dir;
  auto* run = app.add_subcommand("run", "Run every (method, stepsize, seed) of a config");
  run->add_option("config", config, "Config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Run a stepsize sweep and pick the best stepsize per method");
  sweep->add_option("config", config, "Config file")->required();
  auto* aud = app.add_subcommand("audit", "Re-audit the traces under a directory");
  aud->add_option("trace-dir", trace_dir, "Directory holding run directories")->required();
  auto* plot = app.add_subcommand("plot", "Render a median/IQR convergence plot");
  plot->add_option("trace-dir", trace_dir, "Directory holding run directories")->required();
  plot->add_option("--window", opt.window, "Centered moving-average window");
  auto* demo = app.add_subcommand("partition-demo", "Show a Dirichlet partition of synthetic labels");
  demo->add_option("config", config, "Config file")->required();
  for (auto* sub : {run, sweep, aud, plot, demo}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    opt.out_dir = out_dir;
    if (!seeds.empty()) opt.seeds = parse_seed_list(seeds);
    if (*run) return cmd_run(config, opt, out);
    if (*sweep) return cmd_sweep(config, opt, out);
    if (*aud) return cmd_audit(trace_dir, out);
    if (*plot) return cmd_plot(trace_dir, opt.window, out, err);
    if (*demo) return cmd_partition_demo(config, opt, out);
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace ringleader::cli
