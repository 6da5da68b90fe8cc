#pragma once

#include <cstdint>

#include "ringleader/algorithms/server_core.hpp"
#include "ringleader/algorithms/stopping.hpp"

namespace ringleader {

// Malenia SGD: every worker computes at x^k until the rule holds, then one
// synchronous update and a broadcast that aborts all in-flight work. With
// AllWorkersOnce this is the parameter-free variant.
template <Problem P>
class MaleniaServer : public ServerCore<P> {
  using Core = ServerCore<P>;

 public:
  MaleniaServer(const P& problem, ServerOptions options, StoppingRule rule)
      : Core(problem, options), rule_(rule), table_(problem.workers(), problem.initial_point().size()) {}

  Disposition on_event(const GradientEvent& e, WorkerPool& pool) {
    const Vector g = this->receive(e);
    if (e.iterate_index != this->iterations()) {
      throw InvariantViolation("malenia received a gradient from a previous iterate");
    }
    table_.add(e.worker_id, g, e.iterate_index);
    if (rule_.satisfied(table_.b)) {
      auto& rec = this->apply_update(e, pool, table_.G, table_.b, table_.stamp, 1);
      rec.discarded = this->assign_all(pool);
      table_.clear();
    }
    return Disposition::Malenia;
  }

 private:
  StoppingRule rule_;
  GradientTable table_;
};

}  // namespace ringleader
