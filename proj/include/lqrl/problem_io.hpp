#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "lqrl/agents.hpp"
#include "lqrl/lq_model.hpp"

namespace lqrl {

using AnyProblem = std::variant<LqProblem, LqgProblem>;

// Problem files are JSON objects:
//   { "n": 1, "m": 1, "F": [[0.9]], "G": [[1]], "Q": [[1]], "R": [[1]],
//     "Qf": [[1]], "p": 0.1,
//     // LQG only (detected by the presence of "H"):
//     "k": 1, "H": [[1]], "OmegaXi": [[0.01]], "OmegaZeta": [[0.01]],
//     "Sigma1": [[0]], "xhat1": [0] }
// Matrices are arrays of rows. Malformed input throws ParseError naming the
// key (or line/column for syntax errors); a well-formed problem that breaks
// an invariant throws ValidationError listing every offender.
AnyProblem parse_problem_text(const std::string& text);
AnyProblem parse_problem(const std::filesystem::path& path);

std::string problem_to_text(const LqProblem& prob);
std::string problem_to_text(const LqgProblem& prob);

const LqProblem& base_problem(const AnyProblem& prob);

// Cartesian grid for sweeps. Empty axes fall back to the base config value.
struct SweepGrid {
  std::vector<std::uint64_t> seeds;
  std::vector<Schedule> schedules;
  std::vector<double> sigmas;
  std::vector<double> pi0_scales;       // absolute kappa values
  std::vector<double> pi0_multipliers;  // kappa = multiplier * lambda_max(Pi*)
};

struct ConfigFile {
  TrainerConfig trainer;
  SweepGrid grid;
};

// Config files are JSON objects with any of the keys
//   algorithm, steps, seed, pi0_scale, schedule {a, b},
//   exploration {sigma, decay}, restart_radius, divergence_factor,
//   metrics_stride, sweep {seeds, schedules, sigmas, pi0_scales,
//   pi0_multipliers}.
// Missing keys keep their defaults; unknown keys are a ParseError.
ConfigFile parse_config_text(const std::string& text);
ConfigFile parse_config(const std::filesystem::path& path);

// Canonical JSON of the trainer config (sorted keys), and its FNV-1a hash.
std::string config_canonical(const TrainerConfig& cfg);
std::uint64_t config_hash(const TrainerConfig& cfg);

}  // namespace lqrl
