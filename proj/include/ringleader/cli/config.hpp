#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ringleader/algorithms/simulate.hpp"
#include "ringleader/errors.hpp"
#include "ringleader/timeline.hpp"

namespace ringleader::cli {

enum class ProblemKind { Quadratic, Softmax };

struct ProblemConfig {
  ProblemKind kind = ProblemKind::Quadratic;
  std::size_t dimension = 10;
  std::uint64_t seed = 0;
  // quadratic
  double heterogeneity = 1.0;
  double sigma_sq = 1.0;
  // softmax
  std::size_t classes = 4;
  double alpha = 0.1;
  std::size_t samples_per_client = 64;
};

enum class WorkerSource { TauList, TauGenerator, RoleSwitch, Power };

struct WorkersConfig {
  std::size_t n = 0;
  WorkerSource source = WorkerSource::TauList;
  std::vector<double> taus;
  std::uint64_t roleswitch_s = 2;
  double roleswitch_base_tau = 1.0;
  std::size_t roleswitch_periods = 1000;
  std::vector<std::vector<PowerSegment>> power;  // one list per worker
};

enum class StepsizePolicy { Theory, Fixed, Sweep };

inline const std::vector<double> kDefaultStepsizeGrid{0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};

struct StepsizeConfig {
  StepsizePolicy policy = StepsizePolicy::Theory;
  std::vector<double> values;  // the fixed value, or the sweep grid
  std::optional<double> B_lower;
};

struct RunConfig {
  ProblemConfig problem;
  std::vector<Algorithm> algorithms;
  WorkersConfig workers;
  StepsizeConfig stepsize;
  std::optional<double> epsilon;
  std::optional<double> sigma_sq;  // overrides the problem's constant for the rule and the theory
  std::vector<std::uint64_t> seeds;
  Horizon horizon;
  std::size_t window = 1;
  bool replay = false;
  std::vector<std::pair<std::string, std::string>> entries;  // as written, for the metadata echo
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ConfigurationError(key + ": '" + v + "' is not a finite number");
  }
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigurationError(key + ": '" + v + "' is not a non-negative integer");
  return out;
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(key, item));
  return out;
}

}  // namespace detail

// "3", "1,2,5" or "1..10" (inclusive); mixed forms are allowed.
inline std::vector<std::uint64_t> parse_seed_list(const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& item : detail::split(v, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(detail::parse_uint("seeds", item));
      continue;
    }
    const auto lo = detail::parse_uint("seeds", detail::trim(item.substr(0, dots)));
    const auto hi = detail::parse_uint("seeds", detail::trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigurationError("seeds: empty range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigurationError("seeds must not be empty");
  return out;
}

// "theory", "fixed:0.01" or "sweep:0.001,0.01,0.1".
inline StepsizeConfig parse_stepsize(const std::string& v) {
  StepsizeConfig s;
  if (v == "theory") {
    s.policy = StepsizePolicy::Theory;
    return s;
  }
  const auto colon = v.find(':');
  const std::string kind = detail::trim(v.substr(0, colon));
  if (colon == std::string::npos) throw ConfigurationError("stepsize: expected theory, fixed:<gamma> or sweep:<list>");
  const std::string rest = v.substr(colon + 1);
  if (kind == "fixed") {
    s.policy = StepsizePolicy::Fixed;
    s.values = {detail::parse_double("stepsize", detail::trim(rest))};
  } else if (kind == "sweep") {
    s.policy = StepsizePolicy::Sweep;
    s.values = detail::parse_doubles("stepsize", rest);
  } else {
    throw ConfigurationError("stepsize: unknown policy '" + kind + "'");
  }
  for (double g : s.values)
    if (!(g > 0.0)) throw ConfigurationError("stepsize: every gamma must be positive");
  return s;
}

// "0:1, 2.5:0.5" -> segments starting at 0 (power 1) and 2.5 (power 0.5).
inline std::vector<PowerSegment> parse_power(const std::string& key, const std::string& v) {
  std::vector<PowerSegment> out;
  for (const auto& item : detail::split(v, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigurationError(key + ": expected <start>:<power> pairs");
    out.push_back({detail::parse_double(key, detail::trim(item.substr(0, colon))),
                   detail::parse_double(key, detail::trim(item.substr(colon + 1)))});
  }
  return out;
}

// Flat `key = value` lines; `#` starts a comment. Repeated keys are errors.
inline std::vector<std::pair<std::string, std::string>> read_entries(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = detail::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = detail::trim(body.substr(0, eq));
    std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigurationError("line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!seen.insert(key).second) throw ConfigurationError("key '" + key + "' given twice");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

// Unknown keys are errors.
inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  cfg.entries = read_entries(in);
  const std::map<std::string, std::string> kv(cfg.entries.begin(), cfg.entries.end());

  std::set<std::string> used;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    used.insert(key);
    return it->second;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigurationError("missing required key '" + key + "'");
    return *v;
  };
  auto real = [&](const std::string& key, double& dst) {
    if (auto v = take(key)) dst = detail::parse_double(key, *v);
  };
  auto count = [&](const std::string& key, auto& dst) {
    if (auto v = take(key)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(detail::parse_uint(key, *v));
  };

  const std::string kind = require("problem.kind");
  if (kind == "quadratic") {
    cfg.problem.kind = ProblemKind::Quadratic;
  } else if (kind == "softmax") {
    cfg.problem.kind = ProblemKind::Softmax;
  } else {
    throw ConfigurationError("problem.kind: expected quadratic or softmax, got '" + kind + "'");
  }
  count("problem.dimension", cfg.problem.dimension);
  count("problem.seed", cfg.problem.seed);
  real("problem.heterogeneity", cfg.problem.heterogeneity);
  real("problem.sigma_sq", cfg.problem.sigma_sq);
  count("problem.classes", cfg.problem.classes);
  if (auto v = take("problem.alpha")) {
    cfg.problem.alpha = *v == "inf" ? std::numeric_limits<double>::infinity() : detail::parse_double("problem.alpha", *v);
  }
  count("problem.samples_per_client", cfg.problem.samples_per_client);
  if (cfg.problem.dimension < 1) throw ConfigurationError("problem.dimension must be >= 1");
  if (!(cfg.problem.sigma_sq >= 0.0)) throw ConfigurationError("problem.sigma_sq must be >= 0");
  if (!(cfg.problem.alpha > 0.0)) throw ConfigurationError("problem.alpha must be > 0");

  for (const auto& a : detail::split(require("algorithm"), ',')) cfg.algorithms.push_back(algorithm_from_string(a));

  count("workers.n", cfg.workers.n);
  if (cfg.workers.n < 1) throw ConfigurationError("workers.n must be >= 1");
  const std::size_t n = cfg.workers.n;
  int sources = 0;
  if (auto v = take("workers.tau")) {
    ++sources;
    cfg.workers.source = WorkerSource::TauList;
    cfg.workers.taus = detail::parse_doubles("workers.tau", *v);
    if (cfg.workers.taus.size() != n) {
      throw ConfigurationError("workers.tau lists " + std::to_string(cfg.workers.taus.size()) +
                               " values for workers.n = " + std::to_string(n));
    }
    for (double t : cfg.workers.taus)
      if (!(t > 0.0)) throw ConfigurationError("workers.tau values must be positive");
  }
  if (auto v = take("workers.tau_generator")) {
    ++sources;
    if (*v != "shifted-normal") throw ConfigurationError("workers.tau_generator: only shifted-normal is known");
    cfg.workers.source = WorkerSource::TauGenerator;
  }
  if (auto v = take("workers.roleswitch")) {
    ++sources;
    cfg.workers.source = WorkerSource::RoleSwitch;
    const auto parts = detail::split(*v, ',');
    if (parts.size() < 2 || parts.size() > 3) {
      throw ConfigurationError("workers.roleswitch: expected <s>, <base_tau>[, <periods>]");
    }
    cfg.workers.roleswitch_s = detail::parse_uint("workers.roleswitch", parts[0]);
    cfg.workers.roleswitch_base_tau = detail::parse_double("workers.roleswitch", parts[1]);
    if (parts.size() == 3) cfg.workers.roleswitch_periods = detail::parse_uint("workers.roleswitch", parts[2]);
    if (n != 2) throw ConfigurationError("workers.roleswitch needs workers.n = 2");
  }
  bool any_power = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (auto v = take("workers.power." + std::to_string(i))) {
      any_power = true;
      cfg.workers.power.push_back(parse_power("workers.power." + std::to_string(i), *v));
    }
  }
  if (any_power) {
    ++sources;
    cfg.workers.source = WorkerSource::Power;
    if (cfg.workers.power.size() != n) throw ConfigurationError("workers.power.<i> must be given for every worker");
  }
  if (sources != 1) {
    throw ConfigurationError("give exactly one of workers.tau, workers.tau_generator, workers.roleswitch, "
                             "workers.power.<i>");
  }

  if (auto v = take("stepsize")) {
    cfg.stepsize = parse_stepsize(*v);
  } else {
    cfg.stepsize.policy = StepsizePolicy::Sweep;
    cfg.stepsize.values = kDefaultStepsizeGrid;
  }
  if (auto v = take("stepsize.B_lower")) {
    cfg.stepsize.B_lower = detail::parse_double("stepsize.B_lower", *v);
    if (!(*cfg.stepsize.B_lower >= 1.0)) throw ConfigurationError("stepsize.B_lower must be >= 1");
  }
  if (auto v = take("epsilon")) {
    cfg.epsilon = detail::parse_double("epsilon", *v);
    if (!(*cfg.epsilon > 0.0)) throw ConfigurationError("epsilon must be > 0");
  }
  if (auto v = take("sigma_sq")) {
    cfg.sigma_sq = detail::parse_double("sigma_sq", *v);
    if (!(*cfg.sigma_sq >= 0.0)) throw ConfigurationError("sigma_sq must be >= 0");
  }
  if (auto v = take("seeds")) cfg.seeds = parse_seed_list(*v);
  if (auto v = take("horizon.iterations")) {
    cfg.horizon.iterations = detail::parse_uint("horizon.iterations", *v);
    if (*cfg.horizon.iterations < 1) throw ConfigurationError("horizon.iterations must be >= 1");
  }
  if (auto v = take("horizon.time_budget")) {
    cfg.horizon.time_budget = detail::parse_double("horizon.time_budget", *v);
    if (!(*cfg.horizon.time_budget > 0.0)) throw ConfigurationError("horizon.time_budget must be > 0");
  }
  if (auto v = take("horizon.target")) cfg.horizon.target = detail::parse_double("horizon.target", *v);
  count("plot.window", cfg.window);
  if (cfg.window < 1) throw ConfigurationError("plot.window must be >= 1");
  if (auto v = take("audit.replay")) {
    if (*v != "true" && *v != "false") throw ConfigurationError("audit.replay: expected true or false");
    cfg.replay = *v == "true";
  }

  for (const auto& [key, value] : kv) {
    if (!used.count(key)) throw ConfigurationError("unknown key '" + key + "'");
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  return parse_config(in);
}


struct PartitionDemoConfig {
  std::size_t clients = 0;
  std::size_t classes = 4;
  double alpha = 0.1;
  std::size_t samples_per_client = 64;
  std::uint64_t seed = 0;
};

// Reads workers.n and the problem.* keys that shape a partition; every other
// key is ignored so a full run config works too.
inline PartitionDemoConfig parse_partition_config(std::istream& in) {
  PartitionDemoConfig c;
  for (const auto& [key, value] : read_entries(in)) {
    if (key == "workers.n") c.clients = detail::parse_uint(key, value);
    if (key == "problem.classes") c.classes = detail::parse_uint(key, value);
    if (key == "problem.samples_per_client") c.samples_per_client = detail::parse_uint(key, value);
    if (key == "problem.seed") c.seed = detail::parse_uint(key, value);
    if (key == "problem.alpha") {
      c.alpha = value == "inf" ? std::numeric_limits<double>::infinity() : detail::parse_double(key, value);
    }
  }
  if (c.clients < 1) throw ConfigurationError("workers.n must be >= 1");
  if (c.classes < 2) throw ConfigurationError("problem.classes must be >= 2");
  if (c.samples_per_client < 1) throw ConfigurationError("problem.samples_per_client must be >= 1");
  if (!(c.alpha > 0.0)) throw ConfigurationError("problem.alpha must be > 0");
  return c;
}

inline PartitionDemoConfig load_partition_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  return parse_partition_config(in);
}

}  // namespace ringleader::cli
