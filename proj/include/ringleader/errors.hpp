#pragma once

#include <stdexcept>
#include <string>

namespace ringleader {

// Invalid experiment or object configuration (bad segment list, singular
// system, inconsistent parameters). The CLI maps this to exit code 1.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every worker is stalled or idle before the stop predicate fired.
class SimulationDeadlock : public std::runtime_error {
 public:
  SimulationDeadlock(double stall_time, const std::string& what)
      : std::runtime_error(what), stall_time_(stall_time) {}

  double stall_time() const noexcept { return stall_time_; }

 private:
  double stall_time_;
};

// A server received an event it cannot have been sent (unknown worker,
// gradient computed at an iterate the worker was never assigned).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Oracle evaluated at a non-finite point.
class NumericDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal state broke an algorithm invariant; the run is aborted.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ringleader
