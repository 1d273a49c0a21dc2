#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rollsim/config.hpp"
#include "rollsim/errors.hpp"
#include "rollsim/experiments.hpp"
#include "rollsim/oracles.hpp"
#include "rollsim/simd/force_kernels.hpp"
#include "rollsim/solver_limit.hpp"
#include "rollsim/solver_mm.hpp"
#include "rollsim/solver_smooth.hpp"

namespace rollsim::cli {
namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("output.path", "cannot write " + path);
  return f;
}

std::string output_path(RunConfig& cfg, const std::string& override_path) {
  if (!override_path.empty()) cfg.output.path = override_path;
  if (cfg.output.path.empty()) throw ConfigError("output.path", "no output file (set output.path or pass --out)");
  cfg.resolved["output"]["path"] = cfg.output.path;
  return cfg.output.path;
}

void write_manifest(const std::string& out_path, const std::string& command, const json& config) {
  const json manifest = {{"command", command},
                         {"config", config},
                         {"runtime", {{"simd", simd::active_kernels().name}}}};
  std::ofstream f = open_output(out_path + ".manifest.json");
  f << std::setw(2) << manifest << '\n';
}

void write_trajectory(const Trajectory& z, RunConfig& cfg, const std::string& override_path, const std::string& command,
                      std::ostream& out) {
  const std::string path = output_path(cfg, override_path);
  {
    std::ofstream f = open_output(path);
    z.write_csv(f, cfg.output.precision);
  }
  write_manifest(path, command, cfg.resolved);
  out << std::setprecision(17) << "wrote " << path << " (" << z.size() << " rows, z(T) = " << z.back() << ")\n";
}

int write_study(const StudyReport& r, RunConfig& cfg, const std::string& override_path, const std::string& command,
                std::ostream& out) {
  const std::string path = output_path(cfg, override_path);
  {
    std::ofstream f = open_output(path);
    r.write_csv(f, cfg.output.precision);
  }
  {
    std::ofstream f = open_output(path + ".criteria.csv");
    r.write_criteria_csv(f, cfg.output.precision);
  }
  write_manifest(path, command, cfg.resolved);
  out << r.summary() << '\n';
  return r.pass() ? kOk : kCriterionFailed;
}

Potential potential_from_flag(const std::string& name, double radius) {
  if (name == "abs") return Potential::absolute_value();
  if (name == "quadratic") return Potential::quadratic();
  if (name == "tether") {
    try {
      return Potential::tether(radius);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--radius", e.what());
    }
  }
  throw ConfigError("--psi", "unknown potential \"" + name + "\" (abs, quadratic, tether)");
}

int oracle_command(RunConfig& cfg, const std::string& override_path, std::ostream& out) {
  const std::string kind = cfg.oracle.value("kind", std::string("auto"));
  const ModelSpec& m = cfg.model;
  if (kind == "quadratic_final_position") {
    if (m.kernel.kind() != Kernel::Kind::Exponential)
      throw ConfigError("model.kernel.kind", "quadratic_final_position needs an \"exp\" kernel");
    const double z = quadratic_final_position(m.kernel.beta(), m.kernel.zeta(), m.past);
    const std::string path = output_path(cfg, override_path);
    {
      std::ofstream f = open_output(path);
      f << std::setprecision(cfg.output.precision) << "quantity,value\nz_final," << z << '\n';
    }
    write_manifest(path, "oracle", cfg.resolved);
    out << std::setprecision(17) << z << '\n';
    return kOk;
  }
  if (m.psi.kind() != Potential::Kind::AbsoluteValue)
    throw ConfigError("model.potential.kind", "trajectory oracles are for \"abs\"");
  if (!m.v.is_constant()) throw ConfigError("model.v", "trajectory oracles need a constant drive");
  const double v = m.v.limit();
  const double z0 = m.past(0.0);
  const bool kinematic = std::abs(v) > m.kernel.total_mass();
  if ((kind == "plastic" && kinematic) || (kind == "kinematic" && !kinematic))
    throw ConfigError("oracle.kind", "drive is in the " + std::string(kinematic ? "kinematic" : "plastic") + " regime");
  if (kind != "auto" && kind != "plastic" && kind != "kinematic")
    throw ConfigError("oracle.kind", "unknown oracle \"" + kind + "\" (auto, plastic, kinematic, quadratic_final_position)");
  cfg.resolved["oracle"] = {{"kind", kinematic ? "kinematic" : "plastic"}};

  const std::size_t steps = cfg.solver.steps();
  const std::string path = output_path(cfg, override_path);
  {
    std::ofstream f = open_output(path);
    f << std::setprecision(cfg.output.precision) << "t,z,zdot\n";
    if (kinematic) {
      for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * cfg.solver.dt;
        f << t << ',' << kinematic_trajectory(v, m.kernel, z0, t) << ',' << kinematic_velocity(v, m.kernel, t) << '\n';
      }
    } else {
      const PlasticProfile p = plastic_trajectory(v, m.kernel, z0);
      for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * cfg.solver.dt;
        f << t << ',' << p(t) << ',' << p.velocity(t) << '\n';
      }
      out << std::setprecision(17) << "t1 = " << p.t1() << ", z(inf) = " << p.final_position() << '\n';
    }
  }
  write_manifest(path, "oracle", cfg.resolved);
  out << "wrote " << path << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for delayed gradient-flow adhesion models", "rollsim"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON run config or run manifest");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "Output CSV (overrides output.path)");
  };
  auto* simulate = app.add_subcommand("simulate", "Explicit time stepping for Lipschitz psi'");
  auto* mm = app.add_subcommand("mm", "Minimizing-movements stepping for convex Lipschitz psi");
  auto* limit = app.add_subcommand("limit", "Integrate the macroscopic limit equation");
  auto* gamma = app.add_subcommand("gamma", "Asymptotic velocity for constant data");
  auto* oracle = app.add_subcommand("oracle", "Closed-form reference trajectory");
  auto* converge = app.add_subcommand("converge", "Convergence study in eps");
  auto* longtime = app.add_subcommand("longtime", "Long-time asymptotics study");
  for (auto* s : {simulate, mm, limit, oracle, converge, longtime}) add_common(s, true);
  add_common(gamma, false);

  std::string psi_name = "abs";
  double mu = 1.0;
  double zeta = 1.0;
  double radius = 1.0;
  double v_inf = 0.0;
  std::vector<double> sweep;
  gamma->add_option("--psi", psi_name, "abs | quadratic | tether")->capture_default_str();
  gamma->add_option("--mu", mu, "Total linkage mass (kernel mu*zeta*exp(-zeta a))")->capture_default_str();
  gamma->add_option("--zeta", zeta, "Kernel decay rate")->capture_default_str();
  gamma->add_option("--radius", radius, "Tether radius")->capture_default_str();
  auto* v_opt = gamma->add_option("--v", v_inf, "Drive v_inf");
  auto* sweep_opt = gamma->add_option("--sweep", sweep, "v_min v_max n")->expected(3)->allow_extra_args(false);
  v_opt->excludes(sweep_opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  try {
    if (*gamma) {
      Potential psi = potential_from_flag(psi_name, radius);
      std::optional<Kernel> kernel;
      if (!config_path.empty()) {
        RunConfig cfg = load_run_config(config_path);
        psi = cfg.model.psi;
        kernel = cfg.model.kernel;
        if (!*v_opt && !*sweep_opt) v_inf = cfg.model.v.limit();
      } else {
        if (!(mu >= 0.0)) throw ConfigError("--mu", "must be >= 0");
        if (!(zeta > 0.0)) throw ConfigError("--zeta", "must be > 0");
        kernel = Kernel::exponential(mu * zeta, zeta);
      }
      if (!*sweep_opt) {
        out << std::setprecision(17) << asymptotic_velocity({psi, *kernel, v_inf}) << '\n';
        return kOk;
      }
      if (!(sweep[2] >= 1.0) || sweep[2] != std::floor(sweep[2])) throw ConfigError("--sweep", "n must be a positive integer");
      const std::vector<double> grid = linear_grid(sweep[0], sweep[1], static_cast<std::size_t>(sweep[2]));
      std::vector<double> g(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) g[i] = asymptotic_velocity({psi, *kernel, grid[i]});
      std::ostringstream csv;
      csv << std::setprecision(17) << "v_inf,gamma\n";
      for (std::size_t i = 0; i < grid.size(); ++i) csv << grid[i] << ',' << g[i] << '\n';
      if (out_path.empty()) {
        out << csv.str();
      } else {
        std::ofstream f = open_output(out_path);
        f << csv.str();
        out << "wrote " << out_path << '\n';
      }
      return kOk;
    }

    RunConfig cfg = load_run_config(config_path);
    const ModelSpec& m = cfg.model;
    if (*simulate) {
      Trajectory z = [&] {
        try {
          return solve_smooth(m.psi, m.kernel, m.v, m.past, cfg.solver);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("model.potential", e.what());
        }
      }();
      write_trajectory(z, cfg, out_path, "simulate", out);
      return kOk;
    }
    if (*mm) {
      write_trajectory(solve_mm(m.psi, m.kernel, m.v, m.past, cfg.solver), cfg, out_path, "mm", out);
      return kOk;
    }
    if (*limit) {
      write_trajectory(integrate_limit(m.psi, m.kernel, m.v, m.past, cfg.solver.T, cfg.solver.dt), cfg, out_path,
                       "limit", out);
      return kOk;
    }
    if (*oracle) return oracle_command(cfg, out_path, out);
    if (*converge) {
      ConvergenceSetup s = parse_convergence(cfg);
      StudyReport r = [&] {
        try {
          return convergence_study(m.psi, m.kernel, m.v, m.past, s.eps_list, s.options);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("study", e.what());
        }
      }();
      return write_study(r, cfg, out_path, "converge", out);
    }
    if (*longtime) {
      LongtimeSetup s = parse_longtime(cfg);
      StudyReport r = [&] {
        try {
          return longtime_study(m.psi, m.kernel, m.v, m.past, s.T_list, s.options);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("study", e.what());
        }
      }();
      return write_study(r, cfg, out_path, "longtime", out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kConfig;
}

}  // namespace rollsim::cli
