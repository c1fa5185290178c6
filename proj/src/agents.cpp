#include "lqrl/agents.hpp"

#include <cmath>
#include <string>

#include "lqrl/random.hpp"
#include "run_tracker.hpp"

namespace lqrl {

double Schedule::base(std::uint64_t t) const {
  const double denom = b + static_cast<double>(t);
  if (!(denom > 0.0)) throw ValidationError("schedule: b + t must be positive");
  return a / denom;
}

LearningRate learning_rate(const Schedule& sched, std::uint64_t t, const Vec& x) {
  LearningRate rate;
  rate.alpha_prime = sched.base(t);
  rate.alpha = rate.alpha_prime;
  const double norm = x.norm();
  if (norm > 0.0) {
    const double sq = norm * norm;
    rate.alpha = std::min(rate.alpha_prime, 1.0 / (sq * sq));
  }
  rate.scaling = rate.alpha / rate.alpha_prime;
  return rate;
}

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kTd0:
      return "td0";
    case Algorithm::kSarsa0:
      return "sarsa0";
    case Algorithm::kKfTd0:
      return "kf-td0";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "td0") return Algorithm::kTd0;
  if (name == "sarsa0") return Algorithm::kSarsa0;
  if (name == "kf-td0") return Algorithm::kKfTd0;
  throw ValidationError("unknown algorithm '" + name + "' (expected td0, sarsa0 or kf-td0)");
}

namespace {

void check_config(const TrainerConfig& cfg, bool require_steps) {
  std::string issues;
  auto add = [&issues](const std::string& s) {
    if (!issues.empty()) issues += "; ";
    issues += s;
  };
  if (require_steps && cfg.steps == 0) add("steps must be > 0");
  if (cfg.pi0_scale && !(*cfg.pi0_scale > 0.0)) add("pi0_scale must be > 0");
  if (!(cfg.schedule.a > 0.0)) add("schedule.a must be > 0");
  if (!(cfg.schedule.b > 0.0)) add("schedule.b must be > 0");
  if (!(cfg.exploration.sigma >= 0.0)) add("exploration.sigma must be >= 0");
  if (!(cfg.exploration.decay > 0.0 && cfg.exploration.decay <= 1.0)) {
    add("exploration.decay must be in (0, 1]");
  }
  if (!(cfg.restart_radius >= 0.0)) add("restart_radius must be >= 0");
  if (!(cfg.divergence_factor > 1.0)) add("divergence_factor must be > 1");
  if (cfg.metrics_stride == 0) add("metrics_stride must be > 0");
  if (!issues.empty()) throw ValidationError(issues);
}

}  // namespace

void validate(const TrainerConfig& cfg) { check_config(cfg, true); }

void validate_run_parameters(const TrainerConfig& cfg) { check_config(cfg, false); }

double resolve_pi0_scale(const TrainerConfig& cfg, const OracleSolution* oracle) {
  if (cfg.pi0_scale) return *cfg.pi0_scale;
  if (!oracle) throw ValidationError("pi0_scale must be set when no oracle is available");
  return 10.0 * max_eigenvalue(oracle->pi_star);
}

Vec stack(const Vec& x, const Vec& u) {
  Vec z(x.size() + u.size());
  z << x, u;
  return z;
}

Vec greedy_control_v(const LqProblem& prob, const ValueEstimate& est, const Vec& x) {
  if (est.pi.dim() != prob.n() || x.size() != prob.n()) {
    throw DimensionError("greedy_control_v: size mismatch");
  }
  const Mat& G = prob.G;
  const SymMat s(prob.R.mat() + G.transpose() * est.pi.mat() * G);
  try {
    return -spd_solve(s, G.transpose() * (est.pi.mat() * (prob.F * x)));
  } catch (const DefinitenessError& e) {
    throw DefinitenessError("greedy_control_v: R + G'Pi G not positive definite", e.eigenvalue());
  }
}

Vec greedy_control_q(const QEstimate& est, const Vec& x) {
  if (x.size() != est.n || est.m() <= 0) throw DimensionError("greedy_control_q: size mismatch");
  const SymMat t22(est.block22());
  // Exactly symmetric storage makes (Theta21 + Theta12')/2 == Theta21.
  try {
    return -spd_solve(t22, est.block21() * x);
  } catch (const DefinitenessError& e) {
    throw DefinitenessError("greedy_control_q: Theta22 not positive definite", e.eigenvalue());
  }
}

double td_error_v(const LqProblem& prob, const ValueEstimate& est, const Vec& x, const Vec& u,
                  const StepOutcome& outcome) {
  if (outcome.stopped) return final_cost(prob, x) - est.pi.quad(x);
  (void)u;
  return outcome.stage_cost + est.pi.quad(outcome.next_state) - est.pi.quad(x);
}

ValueEstimate update_pi(const ValueEstimate& est, double alpha, double delta, const Vec& x) {
  return ValueEstimate{est.pi.rank_one_update(alpha * delta, x)};
}

double td_error_q(const LqProblem& prob, const QEstimate& est, const Vec& z, const Vec& z_next,
                  const StepOutcome& outcome) {
  if (outcome.stopped) return final_cost(prob, z.head(est.n)) - est.theta.quad(z);
  return outcome.stage_cost + est.theta.quad(z_next) - est.theta.quad(z);
}

QEstimate update_theta(const QEstimate& est, double alpha, double delta, const Vec& z) {
  return QEstimate{est.theta.rank_one_update(alpha * delta, z), est.n};
}

StepDiagnostics expected_td_error(const LqProblem& prob, const ValueEstimate& est, const Vec& x,
                                  const OracleSolution* oracle, double scaling) {
  const Vec u = greedy_control_v(prob, est, x);
  const Vec next = prob.F * x + prob.G * u;
  StepDiagnostics d;
  d.expected_delta = prob.p * final_cost(prob, x) +
                     (1.0 - prob.p) * (stage_cost(prob, x, u) + est.pi.quad(next)) -
                     est.pi.quad(x);
  if (oracle) {
    const double gap = (est.pi - oracle->pi_star).quad(x);
    d.descent_inner = scaling * d.expected_delta * gap;
    const double norm = spectral_norm(closed_loop(prob, oracle->gain_star));
    d.epsilon2 = 1.0 - (1.0 - prob.p) * norm * norm;
  }
  return d;
}

RunResult run_td0(const LqProblem& prob, const TrainerConfig& cfg, const OracleSolution* oracle,
                  const RecordSink& sink) {
  require_valid(prob);
  validate_run_parameters(cfg);
  const Eigen::Index n = prob.n();
  const Eigen::Index m = prob.m();

  RandomStream stops(cfg.seed, StreamId::kStop);
  RandomStream exploration(cfg.seed, StreamId::kExploration);
  RandomStream restarts(cfg.seed, StreamId::kRestart);

  ValueEstimate est{SymMat::identity(n, resolve_pi0_scale(cfg, oracle))};
  detail::RunTracker tracker(cfg, est.pi.mat(), sink);
  RunResult out;
  if (oracle) {
    out.initial_error = frobenius_norm((est.pi - oracle->pi_star).mat());
    out.start_dominates_optimum = psd_order_geq(est.pi, oracle->pi_star);
  }

  double sigma = cfg.exploration.sigma;
  Vec x = restarts.sphere(n, cfg.restart_radius);
  Vec nu = sigma * exploration.normal(m);
  Vec u = greedy_control_v(prob, est, x) + nu;

  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    const StepOutcome outcome = step(prob, x, u, stops.uniform());
    RunRecord rec;
    rec.t = t;
    rec.episode = out.episodes;
    rec.delta = td_error_v(prob, est, x, u, outcome);
    rec.rate = learning_rate(cfg.schedule, t, x);
    rec.stopped = outcome.stopped;
    rec.state_norm = x.norm();
    if (oracle) rec.pi_error = frobenius_norm((est.pi - oracle->pi_star).mat());

    est = update_pi(est, rec.rate.alpha, rec.delta, x);
    tracker.guard(est.pi.mat(), t);

    rec.x = std::move(x);
    rec.u = std::move(u);
    rec.nu = std::move(nu);
    tracker.emit(rec);

    if (outcome.stopped) {
      ++out.episodes;
      sigma *= cfg.exploration.decay;
      x = restarts.sphere(n, cfg.restart_radius);
    } else {
      x = outcome.next_state;
    }
    nu = sigma * exploration.normal(m);
    u = greedy_control_v(prob, est, x) + nu;
  }

  out.steps = cfg.steps;
  out.pi = est.pi;
  if (oracle) out.final_error = frobenius_norm((est.pi - oracle->pi_star).mat());
  tracker.finish(out);
  return out;
}

RunResult run_sarsa0(const LqProblem& prob, const TrainerConfig& cfg,
                     const OracleSolution* oracle, const RecordSink& sink) {
  require_valid(prob);
  validate_run_parameters(cfg);
  const Eigen::Index n = prob.n();
  const Eigen::Index m = prob.m();

  RandomStream stops(cfg.seed, StreamId::kStop);
  RandomStream exploration(cfg.seed, StreamId::kExploration);
  RandomStream restarts(cfg.seed, StreamId::kRestart);

  QEstimate est{SymMat::identity(n + m, resolve_pi0_scale(cfg, oracle)), n};
  detail::RunTracker tracker(cfg, est.theta.mat(), sink);
  RunResult out;
  auto pi_error = [&](const QEstimate& e) {
    return frobenius_norm((e.recovered_pi() - oracle->pi_star).mat());
  };
  if (oracle) {
    out.initial_error = pi_error(est);
    out.initial_theta_error = frobenius_norm((est.theta - oracle->theta_star).mat());
    out.start_dominates_optimum = psd_order_geq(est.theta, oracle->theta_star);
  }

  double sigma = cfg.exploration.sigma;
  Vec x = restarts.sphere(n, cfg.restart_radius);
  Vec nu = sigma * exploration.normal(m);
  Vec u = greedy_control_q(est, x) + nu;

  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    const StepOutcome outcome = step(prob, x, u, stops.uniform());
    const Vec z = stack(x, u);
    RunRecord rec;
    rec.t = t;
    rec.episode = out.episodes;
    rec.rate = learning_rate(cfg.schedule, t, z);
    rec.stopped = outcome.stopped;
    rec.state_norm = x.norm();
    if (oracle) rec.pi_error = pi_error(est);

    Vec next_x;
    Vec next_nu;
    Vec next_u;
    if (outcome.stopped) {
      rec.delta = td_error_q(prob, est, z, Vec(), outcome);
    } else {
      // The next action comes from Theta_t: delta_t needs z_{t+1}.
      next_x = outcome.next_state;
      next_nu = sigma * exploration.normal(m);
      next_u = greedy_control_q(est, next_x) + next_nu;
      rec.delta = td_error_q(prob, est, z, stack(next_x, next_u), outcome);
    }

    est = update_theta(est, rec.rate.alpha, rec.delta, z);
    tracker.guard(est.theta.mat(), t);

    rec.x = std::move(x);
    rec.u = std::move(u);
    rec.nu = std::move(nu);
    tracker.emit(rec);

    if (outcome.stopped) {
      ++out.episodes;
      sigma *= cfg.exploration.decay;
      x = restarts.sphere(n, cfg.restart_radius);
      nu = sigma * exploration.normal(m);
      u = greedy_control_q(est, x) + nu;
    } else {
      x = std::move(next_x);
      nu = std::move(next_nu);
      u = std::move(next_u);
    }
  }

  out.steps = cfg.steps;
  out.theta = est.theta;
  out.pi = est.recovered_pi();
  if (oracle) {
    out.final_error = frobenius_norm((out.pi - oracle->pi_star).mat());
    out.final_theta_error = frobenius_norm((est.theta - oracle->theta_star).mat());
  }
  tracker.finish(out);
  return out;
}

}  // namespace lqrl
