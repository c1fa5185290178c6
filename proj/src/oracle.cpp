#include "lqrl/oracle.hpp"

#include <cmath>
#include <sstream>

#include "lqrl/random.hpp"

namespace lqrl {

namespace {

constexpr double kBlowUp = 1e100;

}  // namespace

SymMat riccati_map(const LqProblem& prob, const SymMat& pi) {
  const Mat& F = prob.F;
  const Mat& G = prob.G;
  const Mat pi_f = pi.mat() * F;
  const SymMat s(prob.R.mat() + G.transpose() * pi.mat() * G);
  const Mat gain = spd_solve(s, G.transpose() * pi_f);  // (R+G'PiG)^{-1} G'Pi F
  const Mat inner = prob.Q.mat() + F.transpose() * pi_f - pi_f.transpose() * G * gain;
  return SymMat(prob.p * prob.Qf.mat() + (1.0 - prob.p) * inner, 1e-7);
}

OracleSolution solve_pi_star(const LqProblem& prob, const OracleOptions& opts) {
  require_valid(prob);
  SymMat pi = SymMat::zero(prob.n());
  double residual = 0.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    SymMat next = riccati_map(prob, pi);
    residual = spectral_norm((next - pi).mat());
    pi = std::move(next);
    if (residual <= opts.tol) {
      // One more application certifies the stored iterate itself.
      residual = spectral_norm((riccati_map(prob, pi) - pi).mat());
      if (residual > opts.tol) continue;
      OracleSolution sol;
      sol.pi_star = pi;
      sol.gain_star = greedy_policy(prob, pi);
      sol.theta_star = assemble_theta(prob, pi);
      sol.residual = residual;
      sol.iterations = it;
      return sol;
    }
    if (!std::isfinite(residual) || pi.mat().cwiseAbs().maxCoeff() > kBlowUp) break;
  }
  std::ostringstream msg;
  msg << "Riccati iteration did not converge (residual " << residual << ")";
  throw DivergenceError(msg.str(), residual);
}

SymMat assemble_theta(const LqProblem& prob, const SymMat& pi) {
  const Eigen::Index n = prob.n();
  const Eigen::Index m = prob.m();
  Mat fg(n, n + m);
  fg << prob.F, prob.G;
  Mat theta = fg.transpose() * pi.mat() * fg;
  theta *= (1.0 - prob.p);
  theta.topLeftCorner(n, n) += prob.p * prob.Qf.mat() + (1.0 - prob.p) * prob.Q.mat();
  theta.bottomRightCorner(m, m) += (1.0 - prob.p) * prob.R.mat();
  return SymMat(theta, 1e-7);
}

SymMat value_from_theta(const SymMat& theta, Eigen::Index n) {
  const Eigen::Index m = theta.dim() - n;
  if (n <= 0 || m <= 0) throw DimensionError("value_from_theta: bad block split");
  const Mat& t = theta.mat();
  const SymMat t22(t.bottomRightCorner(m, m));
  const Mat t21 = t.bottomLeftCorner(m, n);
  return SymMat(t.topLeftCorner(n, n) - t21.transpose() * spd_solve(t22, t21), 1e-7);
}

SymMat policy_value(const LqProblem& prob, const Policy& pol, double tol, std::size_t max_iter) {
  const Mat a = closed_loop(prob, pol);
  const double norm = spectral_norm(a);
  if (!(norm < prob.q())) {
    std::ostringstream msg;
    msg << "policy_value: ||F+GL|| = " << norm << " >= q = " << prob.q()
        << ", value is unbounded";
    throw DivergenceError(msg.str(), norm);
  }
  const Mat c = prob.p * prob.Qf.mat() +
                (1.0 - prob.p) * (prob.Q.mat() + pol.gain.transpose() * prob.R.mat() * pol.gain);
  Mat pi = c;
  double residual = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Mat next = c + (1.0 - prob.p) * a.transpose() * pi * a;
    residual = spectral_norm(next - pi);
    pi = std::move(next);
    if (residual <= tol) return SymMat(pi, 1e-7);
  }
  throw DivergenceError("policy_value: fixed point not reached", residual);
}

MonteCarloEstimate monte_carlo_value(const LqProblem& prob, const Policy& pol, const Vec& x0,
                                     std::size_t episodes, std::uint64_t seed) {
  if (x0.size() != prob.n()) throw DimensionError("monte_carlo_value: x0 size mismatch");
  RandomStream stops(seed, StreamId::kMonteCarlo);
  const Mat a = closed_loop(prob, pol);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    Vec x = x0;
    double total = 0.0;
    while (true) {
      if (stops.uniform() < prob.p) {
        total += final_cost(prob, x);
        break;
      }
      const Vec u = pol.gain * x;
      total += stage_cost(prob, x, u);
      x = a * x;
    }
    // Welford
    const double delta = total - mean;
    mean += delta / static_cast<double>(e + 1);
    m2 += delta * (total - mean);
  }
  MonteCarloEstimate out;
  out.mean = mean;
  if (episodes > 1) {
    out.std_error = std::sqrt(m2 / static_cast<double>(episodes - 1) / static_cast<double>(episodes));
  }
  return out;
}

}  // namespace lqrl
