#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lqrl/linalg.hpp"
#include "lqrl/lq_model.hpp"
#include "lqrl/oracle.hpp"

namespace lqrl {

// V(x) = x' Pi x
struct ValueEstimate {
  SymMat pi;
};

// Q(x, u) = z' Theta z with z = (x, u).
struct QEstimate {
  SymMat theta;
  Eigen::Index n = 0;  // state dimension; the rest of theta is the control block

  Eigen::Index m() const { return theta.dim() - n; }
  Mat block11() const { return theta.mat().topLeftCorner(n, n); }
  Mat block12() const { return theta.mat().topRightCorner(n, m()); }
  Mat block21() const { return theta.mat().bottomLeftCorner(m(), n); }
  Mat block22() const { return theta.mat().bottomRightCorner(m(), m()); }
  // Theta11 - Theta12 Theta22^{-1} Theta21
  SymMat recovered_pi() const { return value_from_theta(theta, n); }
};

// Base step size a / (b + t).
struct Schedule {
  double a = 1.0;
  double b = 100.0;

  double base(std::uint64_t t) const;
};

struct LearningRate {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double scaling = 1.0;  // alpha / alpha_prime
};

// alpha = min(alpha', 1/||x||^4), or alpha' when x = 0.
LearningRate learning_rate(const Schedule& sched, std::uint64_t t, const Vec& x);

struct Exploration {
  double sigma = 0.1;   // per-coordinate std of the Gaussian control noise
  double decay = 0.999; // sigma multiplier applied at each episode end
};

enum class Algorithm { kTd0, kSarsa0, kKfTd0 };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct TrainerConfig {
  Algorithm algorithm = Algorithm::kTd0;
  std::uint64_t steps = 200'000;
  std::uint64_t seed = 0;
  // Initial estimate is pi0_scale * I. When unset, 10 * lambda_max(Pi*) is
  // used, which needs an oracle.
  std::optional<double> pi0_scale;
  Schedule schedule;
  Exploration exploration;
  double restart_radius = 2.0;
  // Runs abort once ||Pi_t||_F exceeds divergence_factor * ||Pi_0||_F.
  double divergence_factor = 1e6;
  std::uint64_t metrics_stride = 100;
};

// Throws ValidationError. A job needs steps > 0; the run functions
// themselves accept 0 steps and emit nothing.
void validate(const TrainerConfig& cfg);
void validate_run_parameters(const TrainerConfig& cfg);
double resolve_pi0_scale(const TrainerConfig& cfg, const OracleSolution* oracle);

struct KalmanDiagnostics {
  Vec true_state;
  Vec est_error;  // x_t - x_hat_t
  double sigma_trace = 0.0;
};

struct RunRecord {
  std::uint64_t t = 0;
  std::uint64_t episode = 0;
  Vec x;   // state seen by the learner (the filtered estimate for kf-td0)
  Vec u;
  Vec nu;
  double delta = 0.0;
  LearningRate rate;
  bool stopped = false;
  std::optional<double> pi_error;  // ||Pi_t - Pi*||_F, before the update
  double state_norm = 0.0;
  std::optional<KalmanDiagnostics> kalman;
};

using RecordSink = std::function<void(const RunRecord&)>;

struct RunResult {
  std::uint64_t steps = 0;
  std::uint64_t episodes = 0;  // completed (stopped) episodes
  SymMat pi;                   // final Pi (recovered from Theta for Sarsa)
  std::optional<SymMat> theta;
  std::optional<double> initial_error;
  std::optional<double> final_error;
  std::optional<double> initial_theta_error;
  std::optional<double> final_theta_error;
  std::optional<bool> start_dominates_optimum;  // Pi_0 >= Pi* (Theta_0 >= Theta* for Sarsa)
  double max_state_norm = 0.0;
  double mean_abs_delta_tail = 0.0;  // over the last 10% of steps
};

// -(R + G'Pi G)^{-1} G'Pi F x
Vec greedy_control_v(const LqProblem& prob, const ValueEstimate& est, const Vec& x);
// -Theta22^{-1} (Theta21 + Theta12')/2 x
Vec greedy_control_q(const QEstimate& est, const Vec& x);

double td_error_v(const LqProblem& prob, const ValueEstimate& est, const Vec& x, const Vec& u,
                  const StepOutcome& outcome);
ValueEstimate update_pi(const ValueEstimate& est, double alpha, double delta, const Vec& x);

// `z_next` is ignored when the outcome is a stop.
double td_error_q(const LqProblem& prob, const QEstimate& est, const Vec& z, const Vec& z_next,
                  const StepOutcome& outcome);
QEstimate update_theta(const QEstimate& est, double alpha, double delta, const Vec& z);

Vec stack(const Vec& x, const Vec& u);

struct StepDiagnostics {
  double expected_delta = 0.0;
  std::optional<double> descent_inner;  // A_t E(delta) x'(Pi - Pi*)x
  std::optional<double> epsilon2;       // 1 - (1-p) ||F + G L*||^2
};

// Expectation of the TD error over the stop event under greedy, noise-free
// control: p c_f(x) + (1-p)(c(x, L x) + V(F x + G L x)) - V(x).
StepDiagnostics expected_td_error(const LqProblem& prob, const ValueEstimate& est, const Vec& x,
                                  const OracleSolution* oracle = nullptr, double scaling = 1.0);

RunResult run_td0(const LqProblem& prob, const TrainerConfig& cfg, const OracleSolution* oracle,
                  const RecordSink& sink = {});
RunResult run_sarsa0(const LqProblem& prob, const TrainerConfig& cfg,
                     const OracleSolution* oracle, const RecordSink& sink = {});

}  // namespace lqrl
