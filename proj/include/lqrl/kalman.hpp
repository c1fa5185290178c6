#pragma once

#include <span>

#include "lqrl/agents.hpp"
#include "lqrl/lq_model.hpp"
#include "lqrl/oracle.hpp"

namespace lqrl {

struct KalmanState {
  Vec x_hat;    // one-step predicted mean of x_t given y_1..y_{t-1}
  SymMat sigma; // its error covariance
  Mat gain;     // K used by the most recent update (n x k)
};

KalmanState initial_kalman_state(const LqgProblem& prob);

// K = F Sigma H' (H Sigma H' + OmegaZeta)^{-1}
// x_hat' = F x_hat + G u + K (y - H x_hat)
// Sigma' = OmegaXi + F Sigma F' - K H Sigma F'
// A perfectly known state (Sigma H' == 0) gets K = 0 even when the innovation
// covariance is singular; any other singular case throws DefinitenessError.
KalmanState kf_step(const LqgProblem& prob, const KalmanState& state, const Vec& u, const Vec& y);

// TD(0) driven by the filtered state. The learner never reads the true
// state; records carry it in `kalman` for diagnostics only.
RunResult run_kf_td0(const LqgProblem& prob, const TrainerConfig& cfg,
                     const OracleSolution* oracle, const RecordSink& sink = {});

struct EstimationStats {
  Vec mean_error;
  SymMat mean_sq_error;  // mean of e e'
  double max_state_norm = 0.0;
};

// Sample statistics of the estimation error over records produced by
// run_kf_td0. Throws Error on empty input or records without true states.
EstimationStats estimation_error_stats(std::span<const RunRecord> records);

}  // namespace lqrl
