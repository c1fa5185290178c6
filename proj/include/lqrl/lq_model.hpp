#pragma once

#include <string>
#include <vector>

#include "lqrl/linalg.hpp"

namespace lqrl {

// Stopped LQ problem: x' = F x + G u with stage cost x'Qx + u'Ru, stopped
// after each step with probability p, at which point x'Qf x is charged.
struct LqProblem {
  Mat F;
  Mat G;
  SymMat Q;
  SymMat R;
  SymMat Qf;
  double p = 0.0;

  Eigen::Index n() const { return F.rows(); }
  Eigen::Index m() const { return G.cols(); }
  // 1/sqrt(1-p), the contraction threshold for closed-loop norms.
  double q() const;
};

// LQ problem with process noise xi ~ N(0, OmegaXi), observations
// y = H x + zeta with zeta ~ N(0, OmegaZeta), and initial belief
// (x_hat1, Sigma1).
struct LqgProblem {
  LqProblem base;
  Mat H;
  SymMat omega_xi;
  SymMat omega_zeta;
  Vec x_hat1;
  SymMat sigma1;

  Eigen::Index k() const { return H.rows(); }
};

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  std::string str() const;
};

ValidationReport validate(const LqProblem& prob);
ValidationReport validate(const LqgProblem& prob);
// Throws ValidationError listing every issue.
void require_valid(const LqProblem& prob);
void require_valid(const LqgProblem& prob);

// u = gain * x
struct Policy {
  Mat gain;
};

struct StepOutcome {
  bool stopped = false;
  Vec next_state;  // empty when stopped
  double stage_cost = 0.0;
};

double stage_cost(const LqProblem& prob, const Vec& x, const Vec& u);
double final_cost(const LqProblem& prob, const Vec& x);

// Stops iff stop_draw < p.
StepOutcome step(const LqProblem& prob, const Vec& x, const Vec& u, double stop_draw);

struct LqgStepOutcome {
  StepOutcome outcome;
  Vec observation;
};

// `process_noise` and `observation_noise` are realized draws of xi and zeta
// (see NoiseShaper).
LqgStepOutcome step_lqg(const LqgProblem& prob, const Vec& x, const Vec& u,
                        const Vec& process_noise, const Vec& observation_noise, double stop_draw);

// Maps standard normal draws onto the problem's covariances. Built once per
// problem; the symmetric square roots are computed at construction.
class NoiseShaper {
 public:
  explicit NoiseShaper(const LqgProblem& prob);

  Vec process(const Vec& standard_normal) const { return process_root_ * standard_normal; }
  Vec observation(const Vec& standard_normal) const {
    return observation_root_ * standard_normal;
  }
  Vec initial(const Vec& standard_normal) const { return initial_root_ * standard_normal; }

 private:
  Mat process_root_;
  Mat observation_root_;
  Mat initial_root_;
};

// F + G L
Mat closed_loop(const LqProblem& prob, const Policy& pol);

struct StabilityMargin {
  double norm = 0.0;
  double q = 0.0;
  bool satisfies = false;
};

StabilityMargin stability_margin(const LqProblem& prob, const Policy& pol);

// L_Pi = -(R + G'Pi G)^{-1} G'Pi F
Policy greedy_policy(const LqProblem& prob, const SymMat& pi);

}  // namespace lqrl
