#pragma once

#include <cstddef>
#include <cstdint>

#include "lqrl/linalg.hpp"
#include "lqrl/lq_model.hpp"

namespace lqrl {

// Exact dynamic-programming solution of a stopped LQ problem.
struct OracleSolution {
  SymMat pi_star;
  Policy gain_star;
  SymMat theta_star;  // (n+m) x (n+m)
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct OracleOptions {
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
};

// Stopped Bellman operator restricted to quadratic value functions:
//   T(Pi) = p Qf + (1-p) [Q + F'Pi F - F'Pi G (R + G'Pi G)^{-1} G'Pi F]
SymMat riccati_map(const LqProblem& prob, const SymMat& pi);

// Iterates T from Pi = 0 until ||T(Pi) - Pi||_2 <= tol. Throws
// DivergenceError (with the last residual) when max_iter is exhausted or the
// iterate blows up, DefinitenessError if R + G'Pi G loses definiteness.
OracleSolution solve_pi_star(const LqProblem& prob, const OracleOptions& opts = {});

// Theta = p blockdiag(Qf, 0) + (1-p) (blockdiag(Q, R) + [F G]' Pi [F G])
SymMat assemble_theta(const LqProblem& prob, const SymMat& pi);

// Theta11 - Theta12 Theta22^{-1} Theta21, the value matrix of the greedy
// policy of Q(x,u) = z' Theta z. `n` is the state dimension.
SymMat value_from_theta(const SymMat& theta, Eigen::Index n);

// Value matrix of the fixed linear policy u = L x, the solution of
//   Pi_L = p Qf + (1-p) (Q + L'R L + A' Pi_L A),  A = F + G L.
// Requires ||A||_2 < q; otherwise the value is unbounded and a
// DivergenceError is thrown.
SymMat policy_value(const LqProblem& prob, const Policy& pol, double tol = 1e-12,
                    std::size_t max_iter = 1'000'000);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Simulates `episodes` stopped rollouts of u = L x from x0 and averages the
// total cost. Unbiased for x0' Pi_L x0.
MonteCarloEstimate monte_carlo_value(const LqProblem& prob, const Policy& pol, const Vec& x0,
                                     std::size_t episodes, std::uint64_t seed);

}  // namespace lqrl
