#include "lqrl/lemmas.hpp"

#include <algorithm>

namespace lqrl {

namespace {

Mat uniform_matrix(RandomStream& rng, Eigen::Index rows, Eigen::Index cols, double bound) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
  return m;
}

void record(LemmaResult& r, double margin, bool violated) {
  ++r.trials;
  if (violated) ++r.violations;
  r.worst_margin = r.worst_margin ? std::min(*r.worst_margin, margin) : margin;
}

Eigen::Index small_dim(RandomStream& rng, Eigen::Index max_dim) {
  return 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(max_dim)));
}

}  // namespace

SymMat random_pd(RandomStream& rng, Eigen::Index dim, double shift) {
  const Mat w = uniform_matrix(rng, dim, dim, 1.0);
  return SymMat(w * w.transpose() + shift * Mat::Identity(dim, dim));
}

SymMat random_psd(RandomStream& rng, Eigen::Index dim, double scale, Eigen::Index rank) {
  const Mat w = uniform_matrix(rng, dim, rank, 1.0);
  return SymMat(scale * (w * w.transpose()));
}

std::pair<LqProblem, OracleSolution> random_stabilizable_problem(RandomStream& rng,
                                                                 Eigen::Index n, Eigen::Index m) {
  while (true) {
    LqProblem prob;
    prob.F = uniform_matrix(rng, n, n, 1.2);
    prob.G = uniform_matrix(rng, n, m, 1.0);
    prob.Q = random_psd(rng, n, 0.5, n);
    prob.R = random_pd(rng, m);
    prob.Qf = random_pd(rng, n);
    prob.p = rng.uniform(0.05, 0.5);
    try {
      OracleSolution sol = solve_pi_star(prob, OracleOptions{1e-12, 100'000});
      if (stability_margin(prob, sol.gain_star).norm < prob.q()) {
        return {std::move(prob), std::move(sol)};
      }
    } catch (const DivergenceError&) {
    } catch (const DefinitenessError&) {
    }
  }
}

double woodbury_residual(const SymMat& r, const Mat& g, const SymMat& pi) {
  return spectral_norm(woodbury_gain(r, g, pi) - woodbury_gain_alt(r, g, pi));
}

double ordering_contraction_radius(const SymMat& a, const SymMat& b) {
  require_same_shape(a.mat(), b.mat(), "ordering_contraction_radius");
  return spectral_radius(spd_solve(a, b.mat()));
}

bool LemmaReport::ok() const {
  return std::all_of(lemmas.begin(), lemmas.end(),
                     [](const LemmaResult& r) { return r.violations == 0; });
}

LemmaResult check_ordering_pairs(const std::vector<std::pair<SymMat, SymMat>>& pairs, double tol) {
  LemmaResult r{"ordering contraction rho(A^-1 B) <= 1", 0, 0, std::nullopt};
  for (const auto& [a, b] : pairs) {
    const double margin = 1.0 + tol - ordering_contraction_radius(a, b);
    record(r, margin, !(margin >= 0.0));
  }
  return r;
}

LemmaReport run_lemma_suite(std::uint64_t seed, std::size_t trials) {
  RandomStream rng(seed, StreamId::kLemmas);
  LemmaReport report;

  LemmaResult woodbury{"woodbury identity residual <= 1e-9", 0, 0, std::nullopt};
  for (std::size_t i = 0; i < trials; ++i) {
    const Eigen::Index n = small_dim(rng, 5);
    const Eigen::Index m = small_dim(rng, 5);
    const SymMat r = random_pd(rng, m);
    const SymMat pi = random_pd(rng, n);
    const Mat g = uniform_matrix(rng, n, m, 1.0);
    const double margin = 1e-9 - woodbury_residual(r, g, pi);
    record(woodbury, margin, !(margin >= 0.0));
  }
  report.lemmas.push_back(woodbury);

  std::vector<std::pair<SymMat, SymMat>> pairs;
  pairs.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    const Eigen::Index n = small_dim(rng, 5);
    SymMat b = random_pd(rng, n);
    SymMat a = b + random_psd(rng, n, rng.uniform(0.0, 2.0), small_dim(rng, n));
    pairs.emplace_back(std::move(a), std::move(b));
  }
  report.lemmas.push_back(check_ordering_pairs(pairs));

  LemmaResult gain{"greedy gain ||F + G L_Pi|| < q for Pi >= Pi*", 0, 0, std::nullopt};
  for (std::size_t i = 0; i < trials; ++i) {
    const Eigen::Index n = small_dim(rng, 3);
    const Eigen::Index m = small_dim(rng, 3);
    const auto [prob, sol] = random_stabilizable_problem(rng, n, m);
    const SymMat pi = sol.pi_star + random_psd(rng, n, rng.uniform(0.0, 3.0), n);
    const double norm = spectral_norm(closed_loop(prob, greedy_policy(prob, pi)));
    const double margin = prob.q() - norm;
    record(gain, margin, !(margin > 0.0));
  }
  report.lemmas.push_back(gain);
  return report;
}

}  // namespace lqrl
