#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqrl/lq_model.hpp"
#include "lqrl/oracle.hpp"
#include "lqrl/random.hpp"

namespace lqrl {

// Random positive definite matrix W W' + shift I with W entries in [-1, 1].
SymMat random_pd(RandomStream& rng, Eigen::Index dim, double shift = 0.1);
// Random PSD matrix scale * W W' (rank `rank`, entries of W in [-1, 1]).
SymMat random_psd(RandomStream& rng, Eigen::Index dim, double scale, Eigen::Index rank);

// Draws F in [-1.2, 1.2]^{n x n}, G in [-1, 1]^{n x m}, Q = W W'/2,
// R, Qf = W W' + 0.1 I, p in [0.05, 0.5] until the oracle converges and
// certifies ||F + G L*|| < q. Returns the problem with its solution.
std::pair<LqProblem, OracleSolution> random_stabilizable_problem(RandomStream& rng,
                                                                 Eigen::Index n, Eigen::Index m);

// ||(R + G'Pi G)^{-1} G'Pi - R^{-1} G' (G R^{-1} G' + Pi^{-1})^{-1}||_2
double woodbury_residual(const SymMat& r, const Mat& g, const SymMat& pi);

// Spectral radius of A^{-1} B.
double ordering_contraction_radius(const SymMat& a, const SymMat& b);

struct LemmaResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  // Smallest (threshold - measured) over all trials; negative on violation.
  std::optional<double> worst_margin;
};

struct LemmaReport {
  std::vector<LemmaResult> lemmas;

  bool ok() const;
};

// Checks "A >= B implies rho(A^{-1} B) <= 1 + tol" on the given pairs. A pair
// that does not satisfy its hypothesis still counts as a trial and is
// reported as a violation when the contraction fails.
LemmaResult check_ordering_pairs(const std::vector<std::pair<SymMat, SymMat>>& pairs,
                                 double tol = 1e-10);

// Randomized lemma suite: Woodbury identity (residual <= 1e-9),
// ordering contraction (rho <= 1 + 1e-10) and greedy-gain stability
// (||F + G L_Pi|| < q for Pi = Pi* + random PSD). Deterministic per seed.
LemmaReport run_lemma_suite(std::uint64_t seed, std::size_t trials);

}  // namespace lqrl
