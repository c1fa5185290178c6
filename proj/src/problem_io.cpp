#include "lqrl/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lqrl {

using nlohmann::json;

namespace {

const json& require_key(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ParseError("key '" + key + "': expected a number");
  return j.get<double>();
}

Eigen::Index as_count(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_number_unsigned() || v.get<std::int64_t>() <= 0) {
    throw ParseError(std::string("key '") + key + "': expected a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<std::int64_t>());
}

Mat as_matrix(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  const json& v = require_key(j, key);
  const std::string k(key);
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    throw ParseError("key '" + k + "': expected " + std::to_string(rows) + " rows");
  }
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("key '" + k + "': row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = as_number(row[static_cast<std::size_t>(c)], k);
    }
  }
  return m;
}

SymMat as_symmetric(const json& j, const char* key, Eigen::Index dim) {
  const Mat m = as_matrix(j, key, dim, dim);
  try {
    return SymMat(m);
  } catch (const Error&) {
    throw ParseError(std::string("key '") + key + "': matrix is not symmetric");
  }
}

Vec as_vector(const json& j, const char* key, Eigen::Index dim) {
  const json& v = require_key(j, key);
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
    throw ParseError(std::string("key '") + key + "': expected " + std::to_string(dim) +
                     " entries");
  }
  Vec out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out(i) = as_number(v[static_cast<std::size_t>(i)], key);
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

json base_json(const LqProblem& prob) {
  json j;
  j["n"] = prob.n();
  j["m"] = prob.m();
  j["F"] = matrix_json(prob.F);
  j["G"] = matrix_json(prob.G);
  j["Q"] = matrix_json(prob.Q.mat());
  j["R"] = matrix_json(prob.R.mat());
  j["Qf"] = matrix_json(prob.Qf.mat());
  j["p"] = prob.p;
  return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) throw ParseError(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
std::vector<T> as_list(const json& j, const char* key) {
  if (!j.is_array()) throw ParseError(std::string("key '") + key + "': expected an array");
  std::vector<T> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string("key '") + key + "': expected numbers");
    out.push_back(v.get<T>());
  }
  return out;
}

Schedule as_schedule(const json& j) {
  if (!j.is_object()) throw ParseError("key 'schedule': expected an object");
  check_keys(j, {"a", "b"}, "schedule");
  Schedule s;
  if (j.contains("a")) s.a = as_number(j["a"], "schedule.a");
  if (j.contains("b")) s.b = as_number(j["b"], "schedule.b");
  return s;
}

std::uint64_t as_u64(const json& j, const char* key) {
  if (!j.is_number_unsigned()) {
    throw ParseError(std::string("key '") + key + "': expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

}  // namespace

AnyProblem parse_problem_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("problem file must be a JSON object");
  check_keys(j,
             {"name", "n", "m", "k", "F", "G", "Q", "R", "Qf", "p", "H", "OmegaXi", "OmegaZeta",
              "Sigma1", "xhat1"},
             "problem");
  const Eigen::Index n = as_count(j, "n");
  const Eigen::Index m = as_count(j, "m");
  LqProblem base;
  base.F = as_matrix(j, "F", n, n);
  base.G = as_matrix(j, "G", n, m);
  base.Q = as_symmetric(j, "Q", n);
  base.R = as_symmetric(j, "R", m);
  base.Qf = as_symmetric(j, "Qf", n);
  base.p = as_number(require_key(j, "p"), "p");

  if (!j.contains("H")) {
    require_valid(base);
    return base;
  }
  const Eigen::Index k = as_count(j, "k");
  LqgProblem lqg;
  lqg.base = std::move(base);
  lqg.H = as_matrix(j, "H", k, n);
  lqg.omega_xi = as_symmetric(j, "OmegaXi", n);
  lqg.omega_zeta = as_symmetric(j, "OmegaZeta", k);
  lqg.sigma1 = j.contains("Sigma1") ? as_symmetric(j, "Sigma1", n) : SymMat::zero(n);
  lqg.x_hat1 = j.contains("xhat1") ? as_vector(j, "xhat1", n) : Vec::Zero(n);
  require_valid(lqg);
  return lqg;
}

AnyProblem parse_problem(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_problem_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string problem_to_text(const LqProblem& prob) { return base_json(prob).dump(2); }

std::string problem_to_text(const LqgProblem& prob) {
  json j = base_json(prob.base);
  j["k"] = prob.k();
  j["H"] = matrix_json(prob.H);
  j["OmegaXi"] = matrix_json(prob.omega_xi.mat());
  j["OmegaZeta"] = matrix_json(prob.omega_zeta.mat());
  j["Sigma1"] = matrix_json(prob.sigma1.mat());
  j["xhat1"] = json(std::vector<double>(prob.x_hat1.data(), prob.x_hat1.data() + prob.x_hat1.size()));
  return j.dump(2);
}

const LqProblem& base_problem(const AnyProblem& prob) {
  if (const auto* lq = std::get_if<LqProblem>(&prob)) return *lq;
  return std::get<LqgProblem>(prob).base;
}

ConfigFile parse_config_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("config file must be a JSON object");
  check_keys(j,
             {"algorithm", "steps", "seed", "pi0_scale", "schedule", "exploration",
              "restart_radius", "divergence_factor", "metrics_stride", "sweep"},
             "config");
  ConfigFile out;
  TrainerConfig& cfg = out.trainer;
  if (j.contains("algorithm")) {
    if (!j["algorithm"].is_string()) throw ParseError("key 'algorithm': expected a string");
    cfg.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
  }
  if (j.contains("steps")) cfg.steps = as_u64(j["steps"], "steps");
  if (j.contains("seed")) cfg.seed = as_u64(j["seed"], "seed");
  if (j.contains("pi0_scale") && !j["pi0_scale"].is_null()) {
    cfg.pi0_scale = as_number(j["pi0_scale"], "pi0_scale");
  }
  if (j.contains("schedule")) cfg.schedule = as_schedule(j["schedule"]);
  if (j.contains("exploration")) {
    const json& e = j["exploration"];
    if (!e.is_object()) throw ParseError("key 'exploration': expected an object");
    check_keys(e, {"sigma", "decay"}, "exploration");
    if (e.contains("sigma")) cfg.exploration.sigma = as_number(e["sigma"], "exploration.sigma");
    if (e.contains("decay")) cfg.exploration.decay = as_number(e["decay"], "exploration.decay");
  }
  if (j.contains("restart_radius")) {
    cfg.restart_radius = as_number(j["restart_radius"], "restart_radius");
  }
  if (j.contains("divergence_factor")) {
    cfg.divergence_factor = as_number(j["divergence_factor"], "divergence_factor");
  }
  if (j.contains("metrics_stride")) {
    cfg.metrics_stride = as_u64(j["metrics_stride"], "metrics_stride");
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw ParseError("key 'sweep': expected an object");
    check_keys(s, {"seeds", "schedules", "sigmas", "pi0_scales", "pi0_multipliers"}, "sweep");
    if (s.contains("seeds")) {
      for (const auto& v : s["seeds"]) out.grid.seeds.push_back(as_u64(v, "sweep.seeds"));
    }
    if (s.contains("schedules")) {
      if (!s["schedules"].is_array()) throw ParseError("key 'sweep.schedules': expected an array");
      for (const auto& v : s["schedules"]) out.grid.schedules.push_back(as_schedule(v));
    }
    if (s.contains("sigmas")) out.grid.sigmas = as_list<double>(s["sigmas"], "sweep.sigmas");
    if (s.contains("pi0_scales")) {
      out.grid.pi0_scales = as_list<double>(s["pi0_scales"], "sweep.pi0_scales");
    }
    if (s.contains("pi0_multipliers")) {
      out.grid.pi0_multipliers = as_list<double>(s["pi0_multipliers"], "sweep.pi0_multipliers");
    }
  }
  validate(out.trainer);
  return out;
}

ConfigFile parse_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_config_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string config_canonical(const TrainerConfig& cfg) {
  json j;
  j["algorithm"] = to_string(cfg.algorithm);
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  j["pi0_scale"] = cfg.pi0_scale ? json(*cfg.pi0_scale) : json(nullptr);
  j["schedule"] = {{"a", cfg.schedule.a}, {"b", cfg.schedule.b}};
  j["exploration"] = {{"sigma", cfg.exploration.sigma}, {"decay", cfg.exploration.decay}};
  j["restart_radius"] = cfg.restart_radius;
  j["divergence_factor"] = cfg.divergence_factor;
  j["metrics_stride"] = cfg.metrics_stride;
  return j.dump();
}

std::uint64_t config_hash(const TrainerConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : config_canonical(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lqrl
