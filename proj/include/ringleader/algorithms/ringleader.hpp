#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ringleader/algorithms/server_core.hpp"
#include "ringleader/algorithms/stopping.hpp"

namespace ringleader {

// Ringleader ASGD server. Phase 1 collects into the main table until the
// phase-1 rule holds (every worker once, or the Malenia condition for the
// universal-model variant); Phase 2 performs exactly n updates, one per
// worker, buffering gradients from already-updated workers for the next round.
template <Problem P>
class RingleaderServer : public ServerCore<P> {
  using Core = ServerCore<P>;

 public:
  RingleaderServer(const P& problem, ServerOptions options,
                   StoppingRule phase1_rule = StoppingRule::all_workers_once())
      : Core(problem, options),
        rule_(phase1_rule),
        main_(problem.workers(), problem.initial_point().size()),
        plus_(problem.workers(), problem.initial_point().size()),
        in_s_(problem.workers(), false) {}

  bool in_phase2() const noexcept { return phase2_; }

  Disposition on_event(const GradientEvent& e, WorkerPool& pool) {
    const Vector g = this->receive(e);
    const WorkerId j = e.worker_id;
    if (!phase2_) {
      main_.add(j, g, e.iterate_index);
      if (!in_s_[j]) {
        in_s_[j] = true;
        ++s_size_;
      }
      if (!rule_.satisfied(main_.b)) return Disposition::MainTable;
      if (s_size_ != this->n()) throw InvariantViolation("phase 1 ended before every worker contributed");
      phase2_ = true;
      round_updates_ = 0;
      plus_.clear();
      plus_members_ = 0;
      update_for(j, e, pool);
      return Disposition::MainTable;
    }
    if (in_s_[j]) {
      main_.add(j, g, e.iterate_index);
      update_for(j, e, pool);
      return Disposition::MainTable;
    }
    if (plus_.b[j] == 0) ++plus_members_;
    plus_.add(j, g, e.iterate_index);
    return Disposition::PlusTable;
  }

 private:
  void update_for(WorkerId j, const GradientEvent& e, WorkerPool& pool) {
    this->apply_update(e, pool, main_.G, main_.b, main_.stamp, ++round_updates_);
    this->assign(pool, j);
    in_s_[j] = false;
    --s_size_;
    if (s_size_ > 0) return;
    if (round_updates_ != this->n()) throw InvariantViolation("round ended without exactly n updates");
    std::swap(main_, plus_);
    for (WorkerId i = 0; i < this->n(); ++i) in_s_[i] = main_.b[i] > 0;
    s_size_ = plus_members_;
    phase2_ = false;
  }

  StoppingRule rule_;
  GradientTable main_;
  GradientTable plus_;
  std::vector<bool> in_s_;
  std::size_t s_size_ = 0;
  std::size_t plus_members_ = 0;
  std::uint64_t round_updates_ = 0;
  bool phase2_ = false;
};

}  // namespace ringleader
