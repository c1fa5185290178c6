#pragma once

#include <cmath>
#include <sstream>

#include "lqrl/agents.hpp"

namespace lqrl::detail {

// Bookkeeping shared by the three learning loops: summary statistics,
// divergence guard, record forwarding.
class RunTracker {
 public:
  RunTracker(const TrainerConfig& cfg, const Mat& start, const RecordSink& sink)
      : sink_(sink),
        ceiling_(cfg.divergence_factor * start.norm()),
        tail_begin_(cfg.steps - (cfg.steps + 9) / 10) {}

  void emit(const RunRecord& rec) {
    max_state_norm_ = std::max(max_state_norm_, rec.state_norm);
    if (rec.kalman) max_state_norm_ = std::max(max_state_norm_, rec.kalman->true_state.norm());
    if (rec.t >= tail_begin_) {
      tail_sum_ += std::abs(rec.delta);
      ++tail_count_;
    }
    if (sink_) sink_(rec);
  }

  void guard(const Mat& estimate, std::uint64_t t) const {
    const double norm = estimate.norm();
    if (!(norm <= ceiling_)) {
      std::ostringstream msg;
      msg << "divergence guard tripped at t=" << t << ": ||estimate||_F = " << norm
          << " exceeds " << ceiling_;
      throw DivergenceError(msg.str(), norm);
    }
  }

  void finish(RunResult& out) const {
    out.max_state_norm = max_state_norm_;
    out.mean_abs_delta_tail = tail_count_ ? tail_sum_ / static_cast<double>(tail_count_) : 0.0;
  }

 private:
  const RecordSink& sink_;
  double ceiling_;
  std::uint64_t tail_begin_;
  double max_state_norm_ = 0.0;
  double tail_sum_ = 0.0;
  std::uint64_t tail_count_ = 0;
};

}  // namespace lqrl::detail
