#include "lqrl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "lqrl/kalman.hpp"

namespace lqrl {

using nlohmann::json;

namespace {

void print_matrix(std::ostream& out, const std::string& name, const Mat& m) {
  out << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", m(i, j));
      out << (j ? ", " : "") << buf;
    }
    out << "]\n";
  }
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvRecordWriter::CsvRecordWriter(std::ostream& out, bool kalman, std::uint64_t stride)
    : out_(out), kalman_(kalman), stride_(stride) {
  out_ << "t,episode,stopped,delta,alpha,state_norm,pi_error,u_norm";
  if (kalman_) out_ << ",est_error_norm,sigma_trace";
  out_ << '\n';
}

void CsvRecordWriter::write(const RunRecord& rec) {
  if (rec.t % stride_ != 0) return;
  out_ << rec.t << ',' << rec.episode << ',' << (rec.stopped ? 1 : 0) << ','
       << format_double(rec.delta) << ',' << format_double(rec.rate.alpha) << ','
       << format_double(rec.state_norm) << ','
       << (rec.pi_error ? format_double(*rec.pi_error) : std::string()) << ','
       << format_double(rec.u.norm());
  if (kalman_) {
    if (rec.kalman) {
      out_ << ',' << format_double(rec.kalman->est_error.norm()) << ','
           << format_double(rec.kalman->sigma_trace);
    } else {
      out_ << ",,";
    }
  }
  out_ << '\n';
}

std::string summary_json(const RunSummary& s) {
  json j;
  j["algorithm"] = s.algorithm;
  j["seed"] = s.seed;
  j["config_hash"] = hex(s.config_hash);
  j["steps"] = s.steps;
  j["episodes"] = s.episodes;
  j["initial_pi_error"] = s.initial_pi_error ? json(*s.initial_pi_error) : json(nullptr);
  j["final_pi_error"] = s.final_pi_error ? json(*s.final_pi_error) : json(nullptr);
  j["max_state_norm"] = s.max_state_norm;
  j["mean_abs_delta_tail"] = s.mean_abs_delta_tail;
  j["status"] = s.status;
  j["csv"] = s.csv;
  return j.dump();
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("LQRL_OUT_DIR"); env && *env) return env;
  return "lqrl-out";
}

TrainOutcome train(const AnyProblem& prob, const TrainerConfig& cfg_in,
                   const std::filesystem::path& csv_path, bool compare) {
  validate(cfg_in);
  const LqProblem& base = base_problem(prob);
  const auto* lqg = std::get_if<LqgProblem>(&prob);
  if (cfg_in.algorithm == Algorithm::kKfTd0 && !lqg) {
    throw ValidationError("kf-td0 needs an LQG problem (H, OmegaXi, OmegaZeta)");
  }

  TrainerConfig cfg = cfg_in;
  std::optional<OracleSolution> oracle;
  if (compare || !cfg.pi0_scale) {
    oracle = solve_pi_star(base);
    cfg.pi0_scale = resolve_pi0_scale(cfg, &*oracle);
  }
  const OracleSolution* supplied = compare ? &*oracle : nullptr;

  TrainOutcome out;
  RunSummary& s = out.summary;
  s.algorithm = to_string(cfg.algorithm);
  s.seed = cfg.seed;
  s.config_hash = config_hash(cfg_in);
  s.steps = 0;
  s.csv = csv_path.string();

  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw Error("cannot write '" + csv_path.string() + "'");
  CsvRecordWriter writer(csv, cfg.algorithm == Algorithm::kKfTd0, cfg.metrics_stride);
  RecordSink sink = [&writer, &s](const RunRecord& rec) {
    writer.write(rec);
    s.steps = rec.t + 1;
    s.episodes = rec.episode + (rec.stopped ? 1 : 0);
    s.max_state_norm = std::max(s.max_state_norm, rec.state_norm);
  };

  const auto start = std::chrono::steady_clock::now();
  try {
    RunResult result = cfg.algorithm == Algorithm::kTd0 ? run_td0(base, cfg, supplied, sink)
                       : cfg.algorithm == Algorithm::kSarsa0
                           ? run_sarsa0(base, cfg, supplied, sink)
                           : run_kf_td0(*lqg, cfg, supplied, sink);
    s.steps = result.steps;
    s.episodes = result.episodes;
    s.initial_pi_error = result.initial_error;
    s.final_pi_error = result.final_error;
    s.max_state_norm = result.max_state_norm;
    s.mean_abs_delta_tail = result.mean_abs_delta_tail;
    out.result = std::move(result);
  } catch (const DivergenceError& e) {
    s.status = std::string("diverged: ") + e.what();
    out.exit_code = kExitDivergence;
  } catch (const DefinitenessError& e) {
    s.status = std::string("definiteness: ") + e.what();
    out.exit_code = kExitDivergence;
  }
  csv.flush();
  s.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

double round_up_significant(double value, int digits) {
  if (value <= 0.0) return value;
  const double magnitude = std::pow(10.0, std::floor(std::log10(value)) - (digits - 1));
  return std::ceil(value / magnitude - 1e-9) * magnitude;
}

CheckReport check_hypotheses(const LqProblem& prob, double pi0_scale, double tol) {
  const OracleSolution sol = solve_pi_star(prob, OracleOptions{tol, 1'000'000});
  CheckReport r;
  r.pi0_scale = pi0_scale;
  r.pi0_dominates = psd_order_geq(SymMat::identity(prob.n(), pi0_scale), sol.pi_star);
  const StabilityMargin margin = stability_margin(prob, sol.gain_star);
  r.stability_norm = margin.norm;
  r.q = margin.q;
  r.stability_holds = margin.satisfies;
  r.suggested_pi0_scale = round_up_significant(max_eigenvalue(sol.pi_star));
  return r;
}

int cmd_solve(const AnyProblem& prob, double tol, std::ostream& out) {
  const LqProblem& base = base_problem(prob);
  OracleSolution sol;
  try {
    sol = solve_pi_star(base, OracleOptions{tol, 1'000'000});
  } catch (const DivergenceError& e) {
    out << "oracle did not converge: " << e.what() << '\n';
    return kExitOracle;
  }
  const StabilityMargin margin = stability_margin(base, sol.gain_star);
  print_matrix(out, "Pi*", sol.pi_star.mat());
  print_matrix(out, "L*", sol.gain_star.gain);
  print_matrix(out, "Theta*", sol.theta_star.mat());
  out << std::setprecision(12);
  out << "||F+GL*|| = " << margin.norm << '\n';
  out << "q = " << margin.q << '\n';
  out << "residual = " << sol.residual << '\n';
  out << "iterations = " << sol.iterations << '\n';
  out << "stability: " << (margin.satisfies ? "holds" : "FAILS") << '\n';
  return margin.satisfies ? kExitOk : kExitDivergence;
}

int cmd_check(const AnyProblem& prob, std::optional<double> pi0_scale, double tol,
              std::ostream& out) {
  const LqProblem& base = base_problem(prob);
  CheckReport r;
  try {
    OracleSolution sol = solve_pi_star(base, OracleOptions{tol, 1'000'000});
    r = check_hypotheses(base, pi0_scale.value_or(10.0 * max_eigenvalue(sol.pi_star)), tol);
  } catch (const DivergenceError& e) {
    out << "oracle did not converge: " << e.what() << '\n';
    out << "stability hypothesis: FAILS (no stabilizing optimum found)\n";
    return kExitOracle;
  }
  out << std::setprecision(12);
  out << "pi0_scale = " << r.pi0_scale << '\n';
  out << "Pi0 >= Pi*: " << (r.pi0_dominates ? "holds" : "FAILS") << '\n';
  out << "||F+GL*|| = " << r.stability_norm << " vs q = " << r.q << ": "
      << (r.stability_holds ? "holds" : "FAILS") << '\n';
  out << "suggested minimal pi0_scale = " << r.suggested_pi0_scale << '\n';
  if (!r.stability_holds) return kExitDivergence;
  if (!r.pi0_dominates) return kExitValidation;
  return kExitOk;
}

int cmd_train(const AnyProblem& prob, const TrainerConfig& cfg,
              const std::filesystem::path& csv_path, bool compare, std::ostream& out) {
  const TrainOutcome t = train(prob, cfg, csv_path, compare);
  const RunSummary& s = t.summary;
  out << std::setprecision(10);
  out << "algorithm = " << s.algorithm << "\nseed = " << s.seed
      << "\nconfig_hash = " << hex(s.config_hash) << "\nsteps = " << s.steps
      << "\nepisodes = " << s.episodes << '\n';
  if (s.initial_pi_error) out << "initial_pi_error = " << *s.initial_pi_error << '\n';
  if (s.final_pi_error) out << "final_pi_error = " << *s.final_pi_error << '\n';
  if (s.initial_pi_error && s.final_pi_error && *s.initial_pi_error > 0.0) {
    out << "error_ratio = " << *s.final_pi_error / *s.initial_pi_error << '\n';
  }
  out << "max_state_norm = " << s.max_state_norm << "\nmean_abs_delta_tail = "
      << s.mean_abs_delta_tail << "\nwall_clock_s = " << s.wall_clock_seconds
      << "\nstatus = " << s.status << "\ncsv = " << s.csv << '\n';
  return t.exit_code;
}

int cmd_lemmas(std::uint64_t seed, std::size_t trials, std::ostream& out) {
  const LemmaReport report = run_lemma_suite(seed, trials);
  out << std::setprecision(6);
  for (const auto& l : report.lemmas) {
    out << (l.violations == 0 ? "PASS " : "FAIL ") << l.name << ": " << l.trials << " trials, "
        << l.violations << " violations";
    if (l.worst_margin) out << ", worst margin " << *l.worst_margin;
    out << '\n';
  }
  return report.ok() ? kExitOk : kExitLemma;
}

std::vector<TrainerConfig> expand_grid(const TrainerConfig& base, const SweepGrid& grid,
                                       std::optional<double> lambda_max) {
  const std::vector<std::uint64_t> seeds =
      grid.seeds.empty() ? std::vector<std::uint64_t>{base.seed} : grid.seeds;
  const std::vector<Schedule> schedules =
      grid.schedules.empty() ? std::vector<Schedule>{base.schedule} : grid.schedules;
  const std::vector<double> sigmas =
      grid.sigmas.empty() ? std::vector<double>{base.exploration.sigma} : grid.sigmas;
  std::vector<std::optional<double>> kappas;
  for (double k : grid.pi0_scales) kappas.emplace_back(k);
  if (!grid.pi0_multipliers.empty()) {
    if (!lambda_max) throw ValidationError("pi0_multipliers need the oracle");
    for (double k : grid.pi0_multipliers) kappas.emplace_back(k * *lambda_max);
  }
  if (kappas.empty()) kappas.push_back(base.pi0_scale);

  std::vector<TrainerConfig> cells;
  for (auto seed : seeds) {
    for (const auto& sched : schedules) {
      for (double sigma : sigmas) {
        for (const auto& kappa : kappas) {
          TrainerConfig c = base;
          c.seed = seed;
          c.schedule = sched;
          c.exploration.sigma = sigma;
          c.pi0_scale = kappa;
          cells.push_back(c);
        }
      }
    }
  }
  return cells;
}

std::vector<SweepCell> sweep(const AnyProblem& prob, const TrainerConfig& base,
                             const SweepGrid& grid, unsigned parallel,
                             const std::filesystem::path& out_dir, bool compare) {
  std::optional<double> lambda_max;
  if (!grid.pi0_multipliers.empty()) {
    lambda_max = max_eigenvalue(solve_pi_star(base_problem(prob)).pi_star);
  }
  std::vector<SweepCell> cells;
  for (auto& c : expand_grid(base, grid, lambda_max)) {
    validate(c);
    cells.push_back(SweepCell{c, {}, kExitOk});
  }
  std::filesystem::create_directories(out_dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& cell = cells[i];
      const std::string name = "cell-" + hex(config_hash(cell.config)) + ".csv";
      try {
        TrainOutcome t = train(prob, cell.config, out_dir / name, compare);
        cell.summary = std::move(t.summary);
        cell.exit_code = t.exit_code;
      } catch (const std::exception& e) {
        cell.summary.algorithm = to_string(cell.config.algorithm);
        cell.summary.seed = cell.config.seed;
        cell.summary.config_hash = config_hash(cell.config);
        cell.summary.status = std::string("error: ") + e.what();
        cell.exit_code = kExitValidation;
      }
      cell.summary.csv = name;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(parallel, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    const auto ha = config_hash(a.config);
    const auto hb = config_hash(b.config);
    if (ha != hb) return ha < hb;
    return config_canonical(a.config) < config_canonical(b.config);
  });

  json index = json::array();
  for (const auto& cell : cells) {
    json entry = json::parse(summary_json(cell.summary));
    entry["config"] = json::parse(config_canonical(cell.config));
    entry["exit_code"] = cell.exit_code;
    index.push_back(entry);
  }
  std::ofstream f(out_dir / "index.json", std::ios::binary | std::ios::trunc);
  f << index.dump(2) << '\n';
  return cells;
}

int cmd_sweep(const AnyProblem& prob, const TrainerConfig& base, const SweepGrid& grid,
              unsigned parallel, const std::filesystem::path& out_dir, bool compare,
              std::ostream& out) {
  const auto cells = sweep(prob, base, grid, parallel, out_dir, compare);
  int code = kExitOk;
  out << std::setprecision(6);
  for (const auto& cell : cells) {
    out << hex(config_hash(cell.config)) << " seed=" << cell.config.seed
        << " status=" << cell.summary.status;
    if (cell.summary.initial_pi_error && cell.summary.final_pi_error &&
        *cell.summary.initial_pi_error > 0.0) {
      out << " ratio=" << *cell.summary.final_pi_error / *cell.summary.initial_pi_error;
    }
    out << '\n';
    if (cell.exit_code != kExitOk) code = cell.exit_code;
  }
  out << cells.size() << " cells written to " << (out_dir / "index.json").string() << '\n';
  return code;
}

}  // namespace lqrl
