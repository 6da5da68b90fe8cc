#pragma once

#include <cstdint>
#include <vector>

#include "ringleader/algorithms/server_core.hpp"

namespace ringleader {

// Naive Minibatch SGD: one gradient per worker at x^k; a worker that has
// delivered waits idle until the round's update is broadcast.
template <Problem P>
class MinibatchServer : public ServerCore<P> {
  using Core = ServerCore<P>;

 public:
  MinibatchServer(const P& problem, ServerOptions options)
      : Core(problem, options),
        table_(problem.workers(), problem.initial_point().size()) {}

  Disposition on_event(const GradientEvent& e, WorkerPool& pool) {
    const WorkerId w = e.worker_id;
    if (table_.b[w] != 0) throw InvariantViolation("minibatch worker delivered twice in one round");
    table_.add(w, this->receive(e), e.iterate_index);
    pool.idle(w);
    if (++received_ < this->n()) return Disposition::Minibatch;
    this->apply_update(e, pool, table_.G, table_.b, table_.stamp, 1);
    this->assign_all(pool);
    table_.clear();
    received_ = 0;
    return Disposition::Minibatch;
  }

 private:
  GradientTable table_;
  std::size_t received_ = 0;
};

}  // namespace ringleader
