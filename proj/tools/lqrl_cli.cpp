#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lqrl/errors.hpp"
#include "lqrl/harness.hpp"

using namespace lqrl;

namespace {

struct Options {
  std::string problem;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  std::optional<double> pi0_scale;
  double tol = 1e-12;
  std::size_t trials = 1000;
  unsigned parallel = 1;
  bool compare = false;
};

ConfigFile load_config(const Options& o) {
  ConfigFile cf = o.config.empty() ? ConfigFile{} : parse_config(o.config);
  if (o.seed) cf.trainer.seed = *o.seed;
  if (o.steps) cf.trainer.steps = *o.steps;
  if (o.pi0_scale) cf.trainer.pi0_scale = *o.pi0_scale;
  return cf;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TD(0), Sarsa(0) and Kalman-filtered TD(0) on stopped LQ problems"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "solve for Pi*, L*, Theta* and check stability");
  solve->add_option("--problem", o.problem, "problem file")->required();
  solve->add_option("--tol", o.tol, "fixed-point tolerance");

  auto* check = app.add_subcommand("check", "check the convergence hypotheses");
  check->add_option("--problem", o.problem, "problem file")->required();
  check->add_option("--pi0-scale", o.pi0_scale, "initial scale kappa (default 10 lambda_max(Pi*))");
  check->add_option("--tol", o.tol, "fixed-point tolerance");

  auto* train = app.add_subcommand("train", "run one training job");
  train->add_option("--problem", o.problem, "problem file")->required();
  train->add_option("--config", o.config, "config file");
  train->add_option("--out", o.out, "CSV output path");
  train->add_option("--seed", o.seed, "override the config seed");
  train->add_option("--steps", o.steps, "override the step count");
  train->add_option("--pi0-scale", o.pi0_scale, "override the initial scale kappa");
  train->add_flag("--compare", o.compare, "compare against the oracle (fills pi_error)");

  auto* sweep = app.add_subcommand("sweep", "run a grid of training jobs");
  sweep->add_option("--problem", o.problem, "problem file")->required();
  sweep->add_option("--config", o.config, "config file with a sweep section");
  sweep->add_option("--out", o.out, "output directory");
  sweep->add_option("--parallel", o.parallel, "concurrent cells")->check(CLI::PositiveNumber);
  sweep->add_option("--steps", o.steps, "override the step count");
  sweep->add_flag("--compare", o.compare, "compare against the oracle (fills pi_error)");

  auto* lemmas = app.add_subcommand("lemmas", "randomized checks of the supporting lemmas");
  lemmas->add_option("--seed", o.seed, "seed");
  lemmas->add_option("--trials", o.trials, "trials per lemma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*lemmas) return cmd_lemmas(o.seed.value_or(0), o.trials, std::cout);

    const AnyProblem prob = parse_problem(o.problem);
    if (*solve) return cmd_solve(prob, o.tol, std::cout);
    if (*check) return cmd_check(prob, o.pi0_scale, o.tol, std::cout);

    const ConfigFile cf = load_config(o);
    if (*train) {
      std::filesystem::path csv = o.out;
      if (csv.empty()) {
        csv = default_output_dir() / ("run-" + hex16(config_hash(cf.trainer)) + ".csv");
      }
      return cmd_train(prob, cf.trainer, csv, o.compare, std::cout);
    }
    const std::filesystem::path dir = o.out.empty() ? default_output_dir() : std::filesystem::path(o.out);
    return cmd_sweep(prob, cf.trainer, cf.grid, o.parallel, dir, o.compare, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DivergenceError& e) {
    std::cerr << "oracle did not converge: " << e.what() << '\n';
    return kExitOracle;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
