#pragma once

#include <cstdint>
#include <vector>

#include "ringleader/algorithms/server_core.hpp"

namespace ringleader {

// IA^2SGD: a table holding the latest gradient of every worker. The table is
// first filled at x^0 (a repeat sender overwrites its slot), then x^1 goes to
// all workers; afterwards each arrival overwrites its slot, triggers an
// update, and only the sender gets the new iterate.
template <Problem P>
class Ia2sgdServer : public ServerCore<P> {
  using Core = ServerCore<P>;

 public:
  Ia2sgdServer(const P& problem, ServerOptions options)
      : Core(problem, options),
        slots_(problem.workers(), Vector::Zero(problem.initial_point().size())),
        stamps_(problem.workers(), 0),
        filled_(problem.workers(), false),
        ones_(problem.workers(), 1) {}

  bool initializing() const noexcept { return initializing_; }

  Disposition on_event(const GradientEvent& e, WorkerPool& pool) {
    const WorkerId w = e.worker_id;
    slots_[w] = this->receive(e);
    stamps_[w] = e.iterate_index;
    if (initializing_) {
      if (!filled_[w]) {
        filled_[w] = true;
        ++filled_count_;
      }
      if (filled_count_ < this->n()) return Disposition::Ia2sgdSlot;
      initializing_ = false;
      auto& rec = this->apply_update(e, pool, slots_, ones_, stamps_, 1);
      rec.discarded = this->assign_all(pool);
      return Disposition::Ia2sgdSlot;
    }
    this->apply_update(e, pool, slots_, ones_, stamps_, 1);
    this->assign(pool, w);
    return Disposition::Ia2sgdSlot;
  }

 private:
  std::vector<Vector> slots_;
  std::vector<IterationStamp> stamps_;
  std::vector<bool> filled_;
  std::vector<std::uint64_t> ones_;
  std::size_t filled_count_ = 0;
  bool initializing_ = true;
};

}  // namespace ringleader
