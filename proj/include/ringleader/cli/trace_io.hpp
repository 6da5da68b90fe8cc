#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringleader/audit/trace.hpp"
#include "ringleader/cli/config.hpp"
#include "ringleader/errors.hpp"

namespace ringleader::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kTraceHeader =
    "iteration,virtual_time,grad_norm_sq,B_k,max_delay,updates_this_round,discarded_events";
inline constexpr const char* kWorkersHeader = "iteration,worker,delay,batch";
inline constexpr const char* kEventsHeader = "virtual_time,worker,iterate,disposition,sample_seed";

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& records) {
  os << kTraceHeader << '\n';
  for (const auto& r : records) {
    os << r.k << ',' << fmt(r.time) << ',' << fmt(r.grad_norm_sq) << ',' << fmt(r.B_k) << ',' << r.max_delay()
       << ',' << r.updates_this_round << ',' << r.discarded << '\n';
  }
}

inline void write_workers_csv(std::ostream& os, const std::vector<IterationRecord>& records) {
  os << kWorkersHeader << '\n';
  for (const auto& r : records)
    for (std::size_t i = 0; i < r.delays.size(); ++i) os << r.k << ',' << i << ',' << r.delays[i] << ',' << r.batch[i] << '\n';
}

inline void write_events_csv(std::ostream& os, const std::vector<EventLogEntry>& log) {
  os << kEventsHeader << '\n';
  for (const auto& e : log) {
    os << fmt(e.time) << ',' << e.worker_id << ',' << e.iterate_index << ',' << to_string(e.disposition) << ','
       << e.sample_seed << '\n';
  }
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace detail {

// Rows of a CSV file with the expected header; every row must have the
// header's column count.
inline std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ConfigurationError("'" + path.string() + "' does not start with the header '" + header + "'");
  }
  const std::size_t columns = split(header, ',').size();
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != columns) {
      throw ConfigurationError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

inline double cell_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigurationError("bad number '" + s + "' in trace");
  return v;
}

inline std::uint64_t cell_uint(const std::string& s) { return parse_uint("trace", s); }

}  // namespace detail

struct TraceFiles {
  audit::RunTrace trace;
  json metadata;
  double final_grad_norm_sq = 0.0;
};

// Reads trace.csv, workers.csv, events.csv and metadata.json from one run
// directory.
inline TraceFiles load_trace_dir(const fs::path& dir) {
  TraceFiles out;
  try {
    out.metadata = json::parse(read_file(dir / "metadata.json"));
  } catch (const json::exception& e) {
    throw ConfigurationError("metadata.json in '" + dir.string() + "': " + e.what());
  }
  auto& t = out.trace;
  const auto& m = out.metadata;
  try {
    t.algorithm = algorithm_from_string(m.at("algorithm").get<std::string>());
    t.n = m.at("workers").get<std::size_t>();
    if (m.contains("taus") && !m.at("taus").is_null()) t.taus = m.at("taus").get<std::vector<double>>();
    t.events_delivered = m.at("events_delivered").get<std::uint64_t>();
    for (const auto& [name, value] : m.at("dispositions").items()) {
      t.disposition_counts[static_cast<std::size_t>(disposition_from_string(name))] = value.get<std::uint64_t>();
    }
    t.fingerprint = m.value("fingerprint", "");
    out.final_grad_norm_sq = m.at("final_grad_norm_sq").get<double>();
  } catch (const json::exception& e) {
    throw ConfigurationError("metadata.json in '" + dir.string() + "': " + e.what());
  }

  for (const auto& row : detail::read_csv(dir / "trace.csv", kTraceHeader)) {
    IterationRecord r;
    r.k = detail::cell_uint(row[0]);
    r.time = detail::cell_double(row[1]);
    r.grad_norm_sq = detail::cell_double(row[2]);
    r.B_k = detail::cell_double(row[3]);
    r.updates_this_round = detail::cell_uint(row[5]);
    r.discarded = detail::cell_uint(row[6]);
    r.delays.assign(t.n, 0);
    r.batch.assign(t.n, 0);
    t.records.push_back(std::move(r));
  }
  for (const auto& row : detail::read_csv(dir / "workers.csv", kWorkersHeader)) {
    const auto k = detail::cell_uint(row[0]);
    const auto w = detail::cell_uint(row[1]);
    if (k >= t.records.size() || w >= t.n) throw ConfigurationError("workers.csv refers to a missing record");
    t.records[k].delays[w] = detail::cell_uint(row[2]);
    t.records[k].batch[w] = detail::cell_uint(row[3]);
  }
  if (fs::exists(dir / "events.csv")) {
    for (const auto& row : detail::read_csv(dir / "events.csv", kEventsHeader)) {
      EventLogEntry e;
      e.time = detail::cell_double(row[0]);
      e.worker_id = detail::cell_uint(row[1]);
      e.iterate_index = detail::cell_uint(row[2]);
      e.disposition = disposition_from_string(row[3]);
      e.sample_seed = detail::cell_uint(row[4]);
      t.log.push_back(e);
    }
    t.has_log = true;
  }
  return out;
}

// Every directory at or below `root` that holds a trace.csv, sorted.
inline std::vector<fs::path> find_trace_dirs(const fs::path& root) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) throw ConfigurationError("no such directory '" + root.string() + "'");
  if (fs::exists(root / "trace.csv")) out.push_back(root);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "trace.csv")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ringleader::cli
