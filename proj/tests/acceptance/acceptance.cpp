// Acceptance suite: one PASS/FAIL line per criterion.
//
//   lqrl_acceptance                     run all criteria
//   lqrl_acceptance --only 2 --only 9   run a subset
//   lqrl_acceptance --known-red 3,4     failures of these exit with 77
//
// Exit status: 0 when every selected criterion passes, 77 when the only
// failures are listed as known-red, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "lqrl/errors.hpp"
#include "lqrl/harness.hpp"
#include "lqrl/kalman.hpp"
#include "lqrl/lemmas.hpp"

using namespace lqrl;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOracleResidual = 1e-12;
constexpr double kMonteCarloSigmas = 4.0;
constexpr std::size_t kMonteCarloEpisodes = 100'000;
constexpr double kOracleSeconds = 60.0;

constexpr std::uint64_t kTrainSteps = 200'000;
constexpr double kTdRatio = 0.05;
constexpr int kSeeds = 10;
constexpr int kSeedsNeeded = 8;
constexpr double kRunSeconds = 120.0;

constexpr std::size_t kLemmaTrials = 1000;
constexpr double kLemmaSeconds = 30.0;

constexpr int kInductionTriples = 100;
constexpr double kInductionEpsilon = 0.1;
constexpr double kInductionFloor = 1e-8;

constexpr int kRolloutStarts = 100;
constexpr double kRolloutSlack = 1e-12;
constexpr double kMarkovSigmas = 3.0;

constexpr double kKalmanRatio = 0.15;

constexpr int kArgminInstances = 100;
constexpr int kGridPoints = 201;
constexpr double kGridLimit = 5.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Named {
  std::string name;
  LqProblem prob;
  OracleSolution sol;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

LqProblem reference_problem() {
  const Mat one = Mat::Ones(1, 1);
  return LqProblem{0.9 * one, one, SymMat(one), SymMat(one), SymMat(one), 0.1};
}

// The reference scalar problem plus one random 2x2 problem drawn from a
// fixed seed.
const std::vector<Named>& convergence_problems() {
  static const std::vector<Named> problems = [] {
    std::vector<Named> out;
    const LqProblem ref = reference_problem();
    out.push_back({"scalar", ref, solve_pi_star(ref)});
    RandomStream rng(2024, StreamId::kLemmas);
    auto [prob, sol] = random_stabilizable_problem(rng, 2, 1);
    out.push_back({"random-2x2", prob, sol});
    return out;
  }();
  return problems;
}

TrainerConfig protocol(const Named& p, Algorithm algorithm, std::uint64_t seed) {
  TrainerConfig cfg;
  cfg.algorithm = algorithm;
  cfg.steps = kTrainSteps;
  cfg.seed = seed;
  cfg.pi0_scale = 10.0 * max_eigenvalue(p.sol.pi_star);
  cfg.schedule = Schedule{1.0, 100.0};
  cfg.exploration = Exploration{0.1, 0.999};
  return cfg;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("lqrl-acceptance-" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// ---------------------------------------------------------------------------

Verdict oracle_correctness() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Named> problems;
  problems.push_back({"scalar", reference_problem(), {}});
  RandomStream rng(11, StreamId::kLemmas);
  for (int i = 0; i < 5; ++i) {
    const Eigen::Index n = i < 3 ? 2 : 3;
    auto [prob, sol] = random_stabilizable_problem(rng, n, 1 + static_cast<Eigen::Index>(i % 2));
    problems.push_back({"random-" + std::to_string(n) + "x" + std::to_string(n), prob, {}});
  }

  bool pass = true;
  double worst_z = 0.0, worst_residual = 0.0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const Named& p = problems[i];
    const OracleSolution sol = solve_pi_star(p.prob);
    const Vec x0 = rng.sphere(p.prob.n(), 1.0);
    const MonteCarloEstimate mc =
        monte_carlo_value(p.prob, sol.gain_star, x0, kMonteCarloEpisodes, 100 + i);
    const double z = std::abs(mc.mean - sol.pi_star.quad(x0)) / mc.std_error;
    worst_z = std::max(worst_z, z);
    worst_residual = std::max(worst_residual, sol.residual);
    pass = pass && z <= kMonteCarloSigmas && sol.residual <= kOracleResidual;
  }
  const double secs = seconds_since(start);
  pass = pass && secs < kOracleSeconds;
  return {pass, std::to_string(problems.size()) + " problems, worst |MC - x0'Pi*x0| = " +
                    fmt(worst_z) + " stderr (<= 4), worst residual " + fmt(worst_residual) +
                    " (<= 1e-12), " + fmt(secs) + " s (< 60)"};
}

struct SeedTally {
  int good = 0;
  double worst_ratio = 0.0;
  double median_ratio = 0.0;
  double slowest = 0.0;
};

std::string tally_str(const std::string& name, const SeedTally& t) {
  return name + " " + std::to_string(t.good) + "/" + std::to_string(kSeeds) + " (median ratio " +
         fmt(t.median_ratio) + ", worst " + fmt(t.worst_ratio) + ", slowest run " +
         fmt(t.slowest) + " s)";
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Verdict td0_convergence() {
  bool pass = true;
  std::string detail;
  for (const Named& p : convergence_problems()) {
    SeedTally t;
    std::vector<double> ratios;
    for (int seed = 0; seed < kSeeds; ++seed) {
      const auto start = std::chrono::steady_clock::now();
      const TrainerConfig cfg = protocol(p, Algorithm::kTd0, seed);
      const fs::path csv = work_dir() / ("c2-" + p.name + "-" + std::to_string(seed) + ".csv");
      const TrainOutcome out = train(p.prob, cfg, csv, true);
      t.slowest = std::max(t.slowest, seconds_since(start));
      const double ratio = out.summary.final_pi_error && out.exit_code == kExitOk
                               ? *out.summary.final_pi_error / *out.summary.initial_pi_error
                               : std::numeric_limits<double>::infinity();
      ratios.push_back(ratio);
      t.worst_ratio = std::max(t.worst_ratio, ratio);
      t.good += ratio <= kTdRatio;
    }
    t.median_ratio = median(ratios);
    pass = pass && t.good >= kSeedsNeeded && t.slowest < kRunSeconds;
    detail += (detail.empty() ? "" : "; ") + tally_str(p.name, t);
  }
  return {pass, detail + "; need ratio <= 0.05 in >= 8/10 seeds"};
}

struct SarsaOutcome {
  double theta_ratio = std::numeric_limits<double>::infinity();
  double pi_ratio = std::numeric_limits<double>::infinity();
  bool theta22_pd = false;
  bool dominates = false;
};

SarsaOutcome sarsa_run(const Named& p, const TrainerConfig& cfg) {
  SarsaOutcome o;
  try {
    // Every Theta_t is Cholesky-factored for the next greedy control, so a
    // completed run certifies Theta22 > 0 at every step.
    const RunResult r = run_sarsa0(p.prob, cfg, &p.sol);
    o.theta22_pd = true;
    o.theta_ratio = *r.final_theta_error / *r.initial_theta_error;
    o.pi_ratio = *r.final_error / *r.initial_error;
    o.dominates = *r.start_dominates_optimum;
  } catch (const Error&) {
  }
  return o;
}

Verdict sarsa_convergence() {
  bool pass = true;
  std::string detail;
  for (const Named& p : convergence_problems()) {
    int good = 0, theta_ok = 0, pi_ok = 0, pd_ok = 0, dominates = 0;
    std::vector<double> theta_ratios, pi_ratios;
    for (int seed = 0; seed < kSeeds; ++seed) {
      const SarsaOutcome o = sarsa_run(p, protocol(p, Algorithm::kSarsa0, seed));
      theta_ratios.push_back(o.theta_ratio);
      pi_ratios.push_back(o.pi_ratio);
      theta_ok += o.theta_ratio <= kTdRatio;
      pi_ok += o.pi_ratio <= kTdRatio;
      pd_ok += o.theta22_pd;
      dominates += o.dominates;
      good += o.theta_ratio <= kTdRatio && o.pi_ratio <= kTdRatio && o.theta22_pd;
    }
    pass = pass && good >= kSeedsNeeded;
    detail += (detail.empty() ? "" : "; ") + p.name + " " + std::to_string(good) + "/10 (Theta " +
              std::to_string(theta_ok) + "/10, median " + fmt(median(theta_ratios)) +
              "; recovered Pi " + std::to_string(pi_ok) + "/10, median " +
              fmt(median(pi_ratios)) + "; Theta22 PD " + std::to_string(pd_ok) +
              "/10; Theta0 >= Theta* " + std::to_string(dominates) + "/10)";
  }
  return {pass, detail + "; need all three in >= 8/10 seeds"};
}

Verdict lemma_suite() {
  const auto start = std::chrono::steady_clock::now();
  const LemmaReport report = run_lemma_suite(7, kLemmaTrials);
  const double secs = seconds_since(start);
  std::string detail;
  for (const auto& l : report.lemmas) {
    detail += (detail.empty() ? "" : "; ") + l.name + ": " + std::to_string(l.violations) + "/" +
              std::to_string(l.trials) + " violations";
    if (l.worst_margin) detail += ", worst margin " + fmt(*l.worst_margin);
  }
  return {report.ok() && secs < kLemmaSeconds, detail + "; " + fmt(secs) + " s (< 30)"};
}

Verdict induction_diagnostics() {
  RandomStream rng(5, StreamId::kLemmas);
  int sign = 0, lower = 0, upper = 0;
  double worst_delta = -std::numeric_limits<double>::infinity();
  double worst_floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kInductionTriples; ++i) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(3));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(2));
    const auto [prob, sol] = random_stabilizable_problem(rng, n, m);
    const SymMat pi = sol.pi_star + SymMat::identity(n, kInductionEpsilon) +
                      random_psd(rng, n, rng.uniform(0.0, 2.0), n);
    const Vec x = rng.normal(n);

    const StepDiagnostics d = expected_td_error(prob, ValueEstimate{pi}, x, &sol);
    const double alpha = learning_rate(Schedule{}, 0, x).alpha;
    const SymMat next = pi.rank_one_update(alpha * d.expected_delta, x);

    worst_delta = std::max(worst_delta, d.expected_delta);
    const double floor = min_eigenvalue(next - sol.pi_star);
    worst_floor = std::min(worst_floor, floor);
    sign += d.expected_delta > 0.0;
    lower += floor < -kInductionFloor;
    upper += !psd_order_geq(pi, next);
  }
  const bool pass = sign == 0 && lower == 0 && upper == 0;
  return {pass, std::to_string(kInductionTriples) + " triples: E[delta] > 0 in " +
                    std::to_string(sign) + " (max " + fmt(worst_delta) + "), Pi' >= Pi* - 1e-8 I broken in " +
                    std::to_string(lower) + " (min eig " + fmt(worst_floor) + "), Pi' <= Pi broken in " +
                    std::to_string(upper)};
}

struct NoisyKfRuns {
  int good = 0;
  std::vector<double> ratios;
  std::vector<double> true_norms;
};

LqgProblem noisy_scalar() {
  const LqProblem ref = reference_problem();
  const Mat one = Mat::Ones(1, 1);
  return LqgProblem{ref, one, SymMat(0.01 * one), SymMat(0.01 * one), Vec::Zero(1),
                    SymMat(0.01 * one)};
}

const NoisyKfRuns& noisy_kf_runs() {
  static const NoisyKfRuns runs = [] {
    NoisyKfRuns out;
    const LqgProblem prob = noisy_scalar();
    const Named p{"noisy-scalar", prob.base, solve_pi_star(prob.base)};
    for (int seed = 0; seed < kSeeds; ++seed) {
      const TrainerConfig cfg = protocol(p, Algorithm::kKfTd0, seed);
      const RunResult r = run_kf_td0(prob, cfg, &p.sol, [&](const RunRecord& rec) {
        out.true_norms.push_back(rec.kalman->true_state.norm());
      });
      const double ratio = *r.final_error / *r.initial_error;
      out.ratios.push_back(ratio);
      out.good += ratio <= kKalmanRatio;
    }
    return out;
  }();
  return runs;
}

Verdict boundedness() {
  int violations = 0, transitions = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const Named& p : convergence_problems()) {
    TrainerConfig cfg = protocol(p, Algorithm::kTd0, 1);
    cfg.exploration.sigma = 0.0;
    cfg.steps = 20000;
    const double q = p.prob.q();
    bool have_prev = false;
    RunRecord prev;
    run_td0(p.prob, cfg, &p.sol, [&](const RunRecord& rec) {
      if (rec.episode >= kRolloutStarts) return;
      if (have_prev && !prev.stopped) {
        const double excess = rec.x.norm() - (q * prev.x.norm() + kRolloutSlack);
        worst = std::max(worst, excess);
        violations += excess > 0.0;
        ++transitions;
      }
      prev = rec;
      have_prev = true;
    });
  }

  const auto& kf = noisy_kf_runs();
  double mean = 0.0;
  for (double v : kf.true_norms) mean += v;
  mean /= kf.true_norms.size();
  bool markov = true;
  std::string markov_detail;
  for (double e : {0.5, 0.2}) {
    const double threshold = mean / e;
    const double frac =
        static_cast<double>(std::count_if(kf.true_norms.begin(), kf.true_norms.end(),
                                          [&](double v) { return v > threshold; })) /
        kf.true_norms.size();
    const double sd = std::sqrt(e * (1 - e) / kf.true_norms.size());
    markov = markov && frac < e + kMarkovSigmas * sd;
    markov_detail += " Pr(|x| > M'/" + fmt(e) + ") = " + fmt(frac) + " (< " + fmt(e) + ")";
  }
  return {violations == 0 && markov,
          std::to_string(kRolloutStarts) + " noise-free greedy episodes per problem, " +
              std::to_string(transitions) + " transitions, " + std::to_string(violations) +
              " with |x'| > q|x| (max excess " + fmt(worst) + "); KF" + markov_detail};
}

// Drops the Kalman-only columns so the remaining bytes can be compared.
std::string project_kalman_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    auto cells = split(line, ',');
    cells.resize(cells.size() - 2);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

Verdict separation() {
  int identical = 0, compared = 0;
  for (const Named& p : convergence_problems()) {
    const auto n = p.prob.n();
    const LqgProblem lifted{p.prob,         Mat::Identity(n, n), SymMat::zero(n),
                            SymMat::zero(n), Vec::Zero(n),        SymMat::zero(n)};
    for (int seed = 0; seed < 3; ++seed) {
      TrainerConfig cfg = protocol(p, Algorithm::kTd0, seed);
      cfg.metrics_stride = seed == 0 ? 1 : 100;
      const fs::path a = work_dir() / ("c7-td0-" + p.name + std::to_string(seed) + ".csv");
      const fs::path b = work_dir() / ("c7-kf-" + p.name + std::to_string(seed) + ".csv");
      train(p.prob, cfg, a, true);
      cfg.algorithm = Algorithm::kKfTd0;
      train(lifted, cfg, b, true);
      identical += slurp(a) == project_kalman_csv(slurp(b));
      ++compared;
      fs::remove(a);
      fs::remove(b);
    }
  }
  const auto& kf = noisy_kf_runs();
  const bool pass = identical == compared && kf.good >= kSeedsNeeded;
  return {pass, "zero-noise CSVs identical in " + std::to_string(identical) + "/" +
                    std::to_string(compared) + " runs; noisy scalar ratio <= 0.15 in " +
                    std::to_string(kf.good) + "/10 seeds (median " + fmt(median(kf.ratios)) +
                    ", worst " + fmt(*std::max_element(kf.ratios.begin(), kf.ratios.end())) + ")"};
}

Verdict greedy_argmin() {
  RandomStream rng(808, StreamId::kLemmas);
  const double spacing = 2.0 * kGridLimit / (kGridPoints - 1);
  int far = 0, worse = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < kArgminInstances; ++i) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(3));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(3));
    LqProblem prob;
    prob.F = Mat::NullaryExpr(n, n, [&] { return rng.uniform(-1.2, 1.2); });
    prob.G = Mat::NullaryExpr(n, m, [&] { return rng.uniform(-1.0, 1.0); });
    prob.Q = SymMat::identity(n);
    prob.R = random_pd(rng, m);
    prob.Qf = SymMat::identity(n);
    prob.p = 0.5;
    const SymMat pi = random_pd(rng, n);
    Vec x = rng.normal(n);
    Vec u = greedy_control_v(prob, ValueEstimate{pi}, x);
    // keep the minimizer inside the grid (u is linear in x)
    const double reach = u.cwiseAbs().maxCoeff();
    if (reach > 0.9 * kGridLimit) {
      x *= 0.9 * kGridLimit / reach;
      u = greedy_control_v(prob, ValueEstimate{pi}, x);
    }

    // u'Ru + (Fx + Gu)'Pi(Fx + Gu), evaluated directly at every grid point
    const Vec fx = prob.F * x;
    auto objective = [&](const Vec& v) {
      const Vec next = fx + prob.G * v;
      return v.dot(prob.R.mat() * v) + next.dot(pi.mat() * next);
    };
    std::vector<int> idx(m, 0);
    Vec v(m), best(m);
    double best_val = std::numeric_limits<double>::infinity();
    while (true) {
      for (Eigen::Index j = 0; j < m; ++j) v(j) = -kGridLimit + spacing * idx[j];
      const double val = objective(v);
      if (val < best_val) {
        best_val = val;
        best = v;
      }
      Eigen::Index j = 0;
      while (j < m && ++idx[j] == kGridPoints) idx[j++] = 0;
      if (j == m) break;
    }
    const double gap = (u - best).cwiseAbs().maxCoeff();
    worst_gap = std::max(worst_gap, gap);
    far += gap > spacing;
    worse += objective(u) > best_val + 1e-9 * (1.0 + std::abs(best_val));
  }
  return {far == 0 && worse == 0,
          std::to_string(kArgminInstances) + " instances: max |u - grid argmin| = " +
              fmt(worst_gap) + " (<= " + fmt(spacing) + "), " + std::to_string(far) +
              " outside resolution, " + std::to_string(worse) + " beaten by a grid point"};
}

Verdict learning_rate_audit() {
  const double eps = std::numeric_limits<double>::epsilon();
  std::uint64_t rows = 0, bad_positive = 0, bad_cap = 0, bad_base = 0;
  for (const Named& p : convergence_problems()) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      TrainerConfig cfg = protocol(p, Algorithm::kTd0, seed);
      cfg.metrics_stride = 1;
      const fs::path path = work_dir() / ("c9-" + p.name + std::to_string(seed) + ".csv");
      train(p.prob, cfg, path, true);
      std::ifstream in(path);
      std::string line;
      std::getline(in, line);
      const auto header = split(line, ',');
      const auto col = [&](const char* name) {
        return std::find(header.begin(), header.end(), name) - header.begin();
      };
      const auto ct = col("t"), ca = col("alpha"), cn = col("state_norm");
      while (std::getline(in, line)) {
        const auto cells = split(line, ',');
        const double t = std::stod(cells[ct]);
        const double alpha = std::stod(cells[ca]);
        const double norm = std::stod(cells[cn]);
        const double base = cfg.schedule.a / (cfg.schedule.b + t);
        ++rows;
        bad_positive += !(alpha > 0.0);
        bad_base += alpha > base * (1 + 4 * eps);
        if (norm > 0.0) bad_cap += alpha > (1.0 / std::pow(norm, 4)) * (1 + 4 * eps);
      }
      fs::remove(path);
    }
  }
  const bool pass = rows == 2u * kSeeds * kTrainSteps && bad_positive + bad_cap + bad_base == 0;
  return {pass, std::to_string(rows) + " stride-1 rows audited: alpha <= 0 in " +
                    std::to_string(bad_positive) + ", alpha > 1/|x|^4 in " + std::to_string(bad_cap) +
                    ", alpha > alpha' in " + std::to_string(bad_base)};
}

Verdict determinism() {
  int identical = 0, compared = 0;
  for (const Named& p : convergence_problems()) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      const TrainerConfig cfg = protocol(p, Algorithm::kTd0, seed);
      const fs::path a = work_dir() / ("c10-a-" + p.name + std::to_string(seed) + ".csv");
      const fs::path b = work_dir() / ("c10-b-" + p.name + std::to_string(seed) + ".csv");
      train(p.prob, cfg, a, true);
      train(p.prob, cfg, b, true);
      const std::string sa = slurp(a);
      identical += !sa.empty() && sa == slurp(b);
      ++compared;
    }
  }
  return {identical == compared,
          std::to_string(identical) + "/" + std::to_string(compared) + " reruns byte-identical"};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

std::set<int> parse_ids(const std::string& list) {
  std::set<int> out;
  for (const auto& tok : split(list, ',')) {
    if (!tok.empty()) out.insert(std::stoi(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::string known_red;
  bool info = false;
  app.add_option("--only", only, "criterion to run (repeatable)");
  app.add_option("--known-red", known_red, "comma-separated criteria expected to fail");
  app.add_flag("--info", info, "print extra diagnostics");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> red = parse_ids(known_red);

  const std::vector<Criterion> criteria = {
      {1, "oracle correctness", oracle_correctness},
      {2, "TD(0) convergence", td0_convergence},
      {3, "Sarsa(0) convergence", sarsa_convergence},
      {4, "lemma suite", lemma_suite},
      {5, "induction diagnostics", induction_diagnostics},
      {6, "boundedness", boundedness},
      {7, "separation and noisy Kalman TD", separation},
      {8, "greedy argmin", greedy_argmin},
      {9, "learning-rate contract", learning_rate_audit},
      {10, "determinism", determinism},
  };

  int unexpected = 0, expected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << v.detail
              << " [" << fmt(seconds_since(start)) << " s]";
    if (!v.pass && red.count(c.id)) std::cout << " (known red)";
    std::cout << std::endl;
    if (!v.pass) (red.count(c.id) ? expected : unexpected)++;
  }

  if (info) {
    // Sarsa with stronger, slower-decaying exploration, for comparison.
    for (const Named& p : convergence_problems()) {
      TrainerConfig cfg = protocol(p, Algorithm::kSarsa0, 0);
      cfg.exploration = Exploration{0.5, 0.9998};
      const SarsaOutcome o = sarsa_run(p, cfg);
      std::cout << "INFO sarsa0 on " << p.name << " with sigma 0.5, decay 0.9998: Theta ratio "
                << fmt(o.theta_ratio) << ", recovered Pi ratio " << fmt(o.pi_ratio) << std::endl;
    }
  }
  fs::remove_all(work_dir());
  if (unexpected) return 1;
  return expected ? 77 : 0;
}
