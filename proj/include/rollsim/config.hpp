#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rollsim/experiments.hpp"
#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/solver_config.hpp"
#include "rollsim/time_function.hpp"

namespace rollsim {

using json = nlohmann::json;

/// A parsed section together with its normalized JSON (all defaults filled in).
template <class T>
struct Parsed {
  T value;
  json resolved;
};

Parsed<Potential> parse_potential(const json& j, const std::string& path);
Parsed<Kernel> parse_kernel(const json& j, const std::string& path);
Parsed<PastData> parse_past(const json& j, const std::string& path);
/// A bare number is a constant.
Parsed<TimeFunction> parse_time_function(const json& j, const std::string& path);

struct ModelSpec {
  Potential psi;
  Kernel kernel;
  PastData past;
  TimeFunction v;
};

struct OutputSpec {
  std::string path;
  int precision = 17;
};

struct RunConfig {
  ModelSpec model;
  SolverConfig solver;
  OutputSpec output;
  json study;   // validated lazily by the study builders below
  json oracle;
  json resolved;
};

/// Parses a run config; a run manifest ({"command", "config", ...}) is accepted and unwrapped.
/// Throws ConfigError with a dotted field path.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& file);

/// Study settings read from `cfg.study`, with defaults from `cfg.solver`; also records the
/// resolved values in cfg.resolved["study"].
struct ConvergenceSetup {
  std::vector<double> eps_list;
  ConvergenceOptions options;
};
ConvergenceSetup parse_convergence(RunConfig& cfg);

struct LongtimeSetup {
  std::vector<double> T_list;
  LongtimeOptions options;
};
LongtimeSetup parse_longtime(RunConfig& cfg);

}  // namespace rollsim
