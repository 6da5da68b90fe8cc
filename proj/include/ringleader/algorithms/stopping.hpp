#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "ringleader/algorithms/records.hpp"
#include "ringleader/errors.hpp"

namespace ringleader {

// When a collection phase may end: once every worker has contributed
// (AllWorkersOnce), or once the harmonic-mean batch reaches
// max{1, sigma^2 / (n eps)} (MaleniaCondition).
class StoppingRule {
 public:
  enum class Kind { AllWorkersOnce, MaleniaCondition };

  static StoppingRule all_workers_once() { return StoppingRule(Kind::AllWorkersOnce, 0.0, 0.0); }

  static StoppingRule malenia_condition(double sigma_sq, double epsilon) {
    if (!(sigma_sq >= 0.0) || !std::isfinite(sigma_sq)) {
      throw ConfigurationError("stopping rule: sigma_sq must be finite and non-negative");
    }
    if (sigma_sq > 0.0 && !(epsilon > 0.0)) {
      throw ConfigurationError("stopping rule: epsilon must be positive when sigma_sq > 0");
    }
    return StoppingRule(Kind::MaleniaCondition, sigma_sq, epsilon);
  }

  Kind kind() const noexcept { return kind_; }
  double sigma_sq() const noexcept { return sigma_sq_; }
  double epsilon() const noexcept { return epsilon_; }

  double threshold(std::size_t n) const {
    if (kind_ == Kind::AllWorkersOnce || sigma_sq_ == 0.0) return 1.0;
    return std::max(1.0, sigma_sq_ / (static_cast<double>(n) * epsilon_));
  }

  // The relative slack only matters when B equals the threshold up to the
  // rounding of the harmonic mean.
  bool satisfied(std::span<const std::uint64_t> b) const {
    if (std::any_of(b.begin(), b.end(), [](auto v) { return v == 0; })) return false;
    if (kind_ == Kind::AllWorkersOnce) return true;
    return harmonic_batch(b) >= threshold(b.size()) * (1.0 - 1e-12);
  }

  std::string describe() const {
    return kind_ == Kind::AllWorkersOnce ? "all-workers-once" : "malenia-condition";
  }

 private:
  StoppingRule(Kind kind, double sigma_sq, double epsilon)
      : kind_(kind), sigma_sq_(sigma_sq), epsilon_(epsilon) {}

  Kind kind_;
  double sigma_sq_;
  double epsilon_;
};

}  // namespace ringleader
