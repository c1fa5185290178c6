#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lqrl/agents.hpp"
#include "lqrl/lemmas.hpp"
#include "lqrl/oracle.hpp"
#include "lqrl/problem_io.hpp"

namespace lqrl {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitDivergence = 3,
  kExitOracle = 4,
  kExitLemma = 5,
};

// Streams every `stride`-th record (t % stride == 0) as CSV. Columns:
//   t,episode,stopped,delta,alpha,state_norm,pi_error,u_norm
// plus est_error_norm,sigma_trace for Kalman runs. Doubles are printed with
// 17 significant digits; pi_error is empty when no oracle was supplied.
class CsvRecordWriter {
 public:
  CsvRecordWriter(std::ostream& out, bool kalman, std::uint64_t stride);

  void write(const RunRecord& rec);

 private:
  std::ostream& out_;
  bool kalman_;
  std::uint64_t stride_;
};

std::string format_double(double v);

struct RunSummary {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t steps = 0;
  std::uint64_t episodes = 0;
  std::optional<double> initial_pi_error;
  std::optional<double> final_pi_error;
  double max_state_norm = 0.0;
  double mean_abs_delta_tail = 0.0;
  double wall_clock_seconds = 0.0;  // console only, never written to files
  std::string status = "ok";
  std::string csv;  // path of the metrics file, relative for sweeps
};

// Deterministic JSON of a summary (no wall clock).
std::string summary_json(const RunSummary& s);

struct TrainOutcome {
  RunSummary summary;
  std::optional<RunResult> result;
  int exit_code = kExitOk;
};

// Runs one training job, streaming records to `csv_path`. With `compare`
// (or when pi0_scale is unset) the oracle is solved first and pi_error is
// populated. A divergence keeps the partial CSV and yields kExitDivergence.
TrainOutcome train(const AnyProblem& prob, const TrainerConfig& cfg,
                   const std::filesystem::path& csv_path, bool compare);

// Resolves the output location: explicit path, else $LQRL_OUT_DIR, else
// "lqrl-out".
std::filesystem::path default_output_dir();

struct CheckReport {
  double pi0_scale = 0.0;
  bool pi0_dominates = false;      // kappa I >= Pi*
  double stability_norm = 0.0;     // ||F + G L*||
  double q = 0.0;
  bool stability_holds = false;
  double suggested_pi0_scale = 0.0;  // lambda_max(Pi*) rounded up
};

CheckReport check_hypotheses(const LqProblem& prob, double pi0_scale, double tol = 1e-12);

// lambda rounded up to three significant digits.
double round_up_significant(double value, int digits = 3);

// Subcommands. Each prints a human-readable report to `out` and returns the
// process exit code.
int cmd_solve(const AnyProblem& prob, double tol, std::ostream& out);
int cmd_check(const AnyProblem& prob, std::optional<double> pi0_scale, double tol,
              std::ostream& out);
int cmd_train(const AnyProblem& prob, const TrainerConfig& cfg,
              const std::filesystem::path& csv_path, bool compare, std::ostream& out);
int cmd_lemmas(std::uint64_t seed, std::size_t trials, std::ostream& out);

struct SweepCell {
  TrainerConfig config;
  RunSummary summary;
  int exit_code = kExitOk;
};

// Expands the grid against `base` (empty axes keep the base value).
// Multipliers need the oracle's lambda_max(Pi*).
std::vector<TrainerConfig> expand_grid(const TrainerConfig& base, const SweepGrid& grid,
                                       std::optional<double> lambda_max);

// Runs every cell (up to `parallel` at a time), one CSV per cell named
// cell-<hash>.csv in `out_dir`, then writes index.json sorted by config hash.
// The returned cells are in that same order.
std::vector<SweepCell> sweep(const AnyProblem& prob, const TrainerConfig& base,
                             const SweepGrid& grid, unsigned parallel,
                             const std::filesystem::path& out_dir, bool compare);

int cmd_sweep(const AnyProblem& prob, const TrainerConfig& base, const SweepGrid& grid,
              unsigned parallel, const std::filesystem::path& out_dir, bool compare,
              std::ostream& out);

}  // namespace lqrl
