#include "lqrl/lq_model.hpp"

#include <cmath>
#include <sstream>

namespace lqrl {

namespace {

constexpr double kPsdTol = 1e-10;

std::string shape(const Mat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_shape(std::vector<std::string>& issues, const char* name, const Mat& m,
                 Eigen::Index rows, Eigen::Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    issues.push_back(std::string(name) + " has shape " + shape(m) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void check_definite(std::vector<std::string>& issues, const char* name, const SymMat& s,
                    bool strict) {
  if (s.dim() == 0) return;
  const double lo = min_eigenvalue(s);
  std::ostringstream msg;
  if (strict && !(lo > 0.0)) {
    msg << name << " not positive definite (min eigenvalue " << lo << ")";
    issues.push_back(msg.str());
  } else if (!strict && lo < -kPsdTol) {
    msg << name << " not positive semidefinite (min eigenvalue " << lo << ")";
    issues.push_back(msg.str());
  }
}

}  // namespace

double LqProblem::q() const { return 1.0 / std::sqrt(1.0 - p); }

std::string ValidationReport::str() const {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue;
  }
  return out;
}

ValidationReport validate(const LqProblem& prob) {
  ValidationReport report;
  auto& issues = report.issues;
  const Eigen::Index n = prob.F.rows();
  const Eigen::Index m = prob.G.cols();
  if (n == 0) issues.emplace_back("F is empty");
  if (m == 0) issues.emplace_back("G has no columns");
  check_shape(issues, "F", prob.F, n, n);
  check_shape(issues, "G", prob.G, n, m);
  check_shape(issues, "Q", prob.Q.mat(), n, n);
  check_shape(issues, "R", prob.R.mat(), m, m);
  check_shape(issues, "Qf", prob.Qf.mat(), n, n);
  if (!prob.F.allFinite() || !prob.G.allFinite()) issues.emplace_back("F or G has non-finite entries");
  if (!(prob.p > 0.0 && prob.p < 1.0)) {
    issues.push_back("p out of range (0, 1): " + std::to_string(prob.p));
  }
  if (issues.empty()) {
    check_definite(issues, "Q", prob.Q, false);
    check_definite(issues, "R", prob.R, true);
    check_definite(issues, "Qf", prob.Qf, true);
  }
  return report;
}

ValidationReport validate(const LqgProblem& prob) {
  ValidationReport report = validate(prob.base);
  auto& issues = report.issues;
  const Eigen::Index n = prob.base.n();
  const Eigen::Index k = prob.H.rows();
  if (k == 0) issues.emplace_back("H is empty");
  check_shape(issues, "H", prob.H, k, n);
  check_shape(issues, "OmegaXi", prob.omega_xi.mat(), n, n);
  check_shape(issues, "OmegaZeta", prob.omega_zeta.mat(), k, k);
  check_shape(issues, "Sigma1", prob.sigma1.mat(), n, n);
  if (prob.x_hat1.size() != n) {
    issues.push_back("xhat1 has size " + std::to_string(prob.x_hat1.size()) + ", expected " +
                     std::to_string(n));
  }
  if (issues.empty()) {
    check_definite(issues, "OmegaXi", prob.omega_xi, false);
    check_definite(issues, "OmegaZeta", prob.omega_zeta, false);
    check_definite(issues, "Sigma1", prob.sigma1, false);
  }
  return report;
}

void require_valid(const LqProblem& prob) {
  const auto report = validate(prob);
  if (!report.ok()) throw ValidationError(report.str());
}

void require_valid(const LqgProblem& prob) {
  const auto report = validate(prob);
  if (!report.ok()) throw ValidationError(report.str());
}

double stage_cost(const LqProblem& prob, const Vec& x, const Vec& u) {
  return prob.Q.quad(x) + prob.R.quad(u);
}

double final_cost(const LqProblem& prob, const Vec& x) { return prob.Qf.quad(x); }

StepOutcome step(const LqProblem& prob, const Vec& x, const Vec& u, double stop_draw) {
  if (x.size() != prob.n() || u.size() != prob.m()) {
    throw DimensionError("step: state/control size mismatch");
  }
  StepOutcome out;
  if (stop_draw < prob.p) {
    out.stopped = true;
    out.stage_cost = final_cost(prob, x);
    return out;
  }
  out.next_state = prob.F * x + prob.G * u;
  out.stage_cost = stage_cost(prob, x, u);
  return out;
}

LqgStepOutcome step_lqg(const LqgProblem& prob, const Vec& x, const Vec& u,
                        const Vec& process_noise, const Vec& observation_noise, double stop_draw) {
  if (process_noise.size() != prob.base.n() || observation_noise.size() != prob.k()) {
    throw DimensionError("step_lqg: noise size mismatch");
  }
  LqgStepOutcome out;
  out.outcome = step(prob.base, x, u, stop_draw);
  if (!out.outcome.stopped) out.outcome.next_state += process_noise;
  out.observation = prob.H * x + observation_noise;
  return out;
}

NoiseShaper::NoiseShaper(const LqgProblem& prob)
    : process_root_(psd_sqrt(prob.omega_xi)),
      observation_root_(psd_sqrt(prob.omega_zeta)),
      initial_root_(psd_sqrt(prob.sigma1)) {}

Mat closed_loop(const LqProblem& prob, const Policy& pol) {
  if (pol.gain.rows() != prob.m() || pol.gain.cols() != prob.n()) {
    throw DimensionError("closed_loop: gain must be m x n");
  }
  return prob.F + prob.G * pol.gain;
}

StabilityMargin stability_margin(const LqProblem& prob, const Policy& pol) {
  StabilityMargin out;
  out.norm = spectral_norm(closed_loop(prob, pol));
  out.q = prob.q();
  out.satisfies = out.norm <= out.q;
  return out;
}

Policy greedy_policy(const LqProblem& prob, const SymMat& pi) {
  if (pi.dim() != prob.n()) throw DimensionError("greedy_policy: Pi must be n x n");
  return Policy{-woodbury_gain(prob.R, prob.G, pi) * prob.F};
}

}  // namespace lqrl
