#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ringleader::audit {

enum class CheckStatus : std::uint8_t { Pass, Fail, NotApplicable, Inconclusive };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "n/a";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

// A witness names the record (or round, or sample) that broke the check.
struct Witness {
  std::uint64_t index = 0;
  std::string what;
};

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
  std::vector<Witness> witnesses;
  std::uint64_t visited = 0;

  bool passed() const noexcept { return status == CheckStatus::Pass; }
  bool failed() const noexcept { return status == CheckStatus::Fail; }

  // Keeps the report readable for long traces; the count stays exact.
  static constexpr std::size_t kMaxWitnesses = 8;
  std::uint64_t violations = 0;

  void violate(std::uint64_t index, std::string what) {
    status = CheckStatus::Fail;
    ++violations;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back({index, std::move(what)});
  }
};

inline CheckResult not_applicable(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.status = CheckStatus::NotApplicable;
  r.detail = std::move(why);
  return r;
}

// One finding per line: name, status, detail, then the first witness.
inline std::string format_line(const CheckResult& r) {
  std::ostringstream os;
  os << r.name << '\t' << to_string(r.status) << '\t' << r.detail;
  if (r.violations > 0) os << " (" << r.violations << " violations)";
  if (!r.witnesses.empty()) os << "\twitness #" << r.witnesses.front().index << ": " << r.witnesses.front().what;
  return os.str();
}

struct AuditReport {
  std::vector<CheckResult> checks;

  void add(CheckResult r) { checks.push_back(std::move(r)); }

  bool any_failed() const {
    for (const auto& c : checks)
      if (c.failed()) return true;
    return false;
  }

  void write(std::ostream& os) const {
    for (const auto& c : checks) os << format_line(c) << '\n';
  }
};

}  // namespace ringleader::audit
