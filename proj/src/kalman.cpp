#include "lqrl/kalman.hpp"

#include "lqrl/random.hpp"
#include "run_tracker.hpp"

namespace lqrl {

namespace {

constexpr double kPsdTol = 1e-10;

}  // namespace

KalmanState initial_kalman_state(const LqgProblem& prob) {
  return KalmanState{prob.x_hat1, prob.sigma1, Mat::Zero(prob.base.n(), prob.k())};
}

KalmanState kf_step(const LqgProblem& prob, const KalmanState& state, const Vec& u, const Vec& y) {
  const Mat& F = prob.base.F;
  const Mat& H = prob.H;
  const Mat& sigma = state.sigma.mat();
  if (y.size() != prob.k() || u.size() != prob.base.m() || state.x_hat.size() != prob.base.n()) {
    throw DimensionError("kf_step: size mismatch");
  }

  const Vec innovation = y - H * state.x_hat;
  const Mat sigma_ht = sigma * H.transpose();
  KalmanState next;
  if (sigma_ht.isZero(0.0)) {
    next.gain = Mat::Zero(prob.base.n(), prob.k());
  } else {
    const SymMat innovation_cov(H * sigma_ht + prob.omega_zeta.mat());
    try {
      // K' = S^{-1} H Sigma F'
      next.gain = spd_solve(innovation_cov, (F * sigma_ht).transpose()).transpose();
    } catch (const DefinitenessError& e) {
      throw DefinitenessError("kf_step: innovation covariance not positive definite",
                              e.eigenvalue());
    }
  }
  next.x_hat = F * state.x_hat + prob.base.G * u + next.gain * innovation;
  next.sigma = SymMat(prob.omega_xi.mat() + F * sigma * F.transpose() -
                          next.gain * H * sigma * F.transpose(),
                      1e-7);
  if (next.sigma.dim() > 0 && min_eigenvalue(next.sigma) < -kPsdTol) {
    throw DefinitenessError("kf_step: covariance lost positive semidefiniteness",
                            min_eigenvalue(next.sigma));
  }
  return next;
}

RunResult run_kf_td0(const LqgProblem& prob, const TrainerConfig& cfg,
                     const OracleSolution* oracle, const RecordSink& sink) {
  require_valid(prob);
  validate_run_parameters(cfg);
  const LqProblem& base = prob.base;
  const Eigen::Index n = base.n();
  const Eigen::Index m = base.m();
  const Eigen::Index k = prob.k();
  const NoiseShaper shaper(prob);

  RandomStream stops(cfg.seed, StreamId::kStop);
  RandomStream exploration(cfg.seed, StreamId::kExploration);
  RandomStream restarts(cfg.seed, StreamId::kRestart);
  RandomStream process(cfg.seed, StreamId::kProcessNoise);
  RandomStream observation(cfg.seed, StreamId::kObservationNoise);
  RandomStream initial(cfg.seed, StreamId::kInitialBelief);

  ValueEstimate est{SymMat::identity(n, resolve_pi0_scale(cfg, oracle))};
  detail::RunTracker tracker(cfg, est.pi.mat(), sink);
  RunResult out;
  if (oracle) {
    out.initial_error = frobenius_norm((est.pi - oracle->pi_star).mat());
    out.start_dominates_optimum = psd_order_geq(est.pi, oracle->pi_star);
  }

  // Each episode starts from the belief (x_hat1 + restart draw, Sigma1) and a
  // true state sampled from that belief.
  auto begin_episode = [&](KalmanState& filter, Vec& x_true) {
    filter = initial_kalman_state(prob);
    filter.x_hat = prob.x_hat1 + restarts.sphere(n, cfg.restart_radius);
    x_true = filter.x_hat + shaper.initial(initial.normal(n));
  };

  double sigma = cfg.exploration.sigma;
  KalmanState filter;
  Vec x_true;
  begin_episode(filter, x_true);
  Vec nu = sigma * exploration.normal(m);
  Vec u = greedy_control_v(base, est, filter.x_hat) + nu;

  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    const Vec xi = shaper.process(process.normal(n));
    const Vec zeta = shaper.observation(observation.normal(k));
    const LqgStepOutcome env = step_lqg(prob, x_true, u, xi, zeta, stops.uniform());
    const bool stopped = env.outcome.stopped;

    // The learner's view of the transition, built from the filtered state.
    StepOutcome seen;
    seen.stopped = stopped;
    KalmanState next_filter;
    if (stopped) {
      seen.stage_cost = final_cost(base, filter.x_hat);
    } else {
      next_filter = kf_step(prob, filter, u, env.observation);
      seen.next_state = next_filter.x_hat;
      seen.stage_cost = stage_cost(base, filter.x_hat, u);
    }

    RunRecord rec;
    rec.t = t;
    rec.episode = out.episodes;
    rec.delta = td_error_v(base, est, filter.x_hat, u, seen);
    rec.rate = learning_rate(cfg.schedule, t, filter.x_hat);
    rec.stopped = stopped;
    rec.state_norm = filter.x_hat.norm();
    if (oracle) rec.pi_error = frobenius_norm((est.pi - oracle->pi_star).mat());
    rec.kalman = KalmanDiagnostics{x_true, x_true - filter.x_hat, filter.sigma.mat().trace()};

    est = update_pi(est, rec.rate.alpha, rec.delta, filter.x_hat);
    tracker.guard(est.pi.mat(), t);

    rec.x = filter.x_hat;
    rec.u = std::move(u);
    rec.nu = std::move(nu);
    tracker.emit(rec);

    if (stopped) {
      ++out.episodes;
      sigma *= cfg.exploration.decay;
      begin_episode(filter, x_true);
    } else {
      filter = std::move(next_filter);
      x_true = env.outcome.next_state;
    }
    nu = sigma * exploration.normal(m);
    u = greedy_control_v(base, est, filter.x_hat) + nu;
  }

  out.steps = cfg.steps;
  out.pi = est.pi;
  if (oracle) out.final_error = frobenius_norm((est.pi - oracle->pi_star).mat());
  tracker.finish(out);
  return out;
}

EstimationStats estimation_error_stats(std::span<const RunRecord> records) {
  if (records.empty()) throw Error("estimation_error_stats: no records");
  const RunRecord& first = records.front();
  if (!first.kalman) throw Error("estimation_error_stats: records carry no true states");
  const Eigen::Index n = first.kalman->est_error.size();
  Vec sum = Vec::Zero(n);
  Mat sq = Mat::Zero(n, n);
  double max_norm = 0.0;
  for (const auto& rec : records) {
    if (!rec.kalman) throw Error("estimation_error_stats: records carry no true states");
    const Vec& e = rec.kalman->est_error;
    sum += e;
    sq += e * e.transpose();
    max_norm = std::max(max_norm, rec.kalman->true_state.norm());
  }
  const double count = static_cast<double>(records.size());
  return EstimationStats{sum / count, SymMat(sq / count), max_norm};
}

}  // namespace lqrl
