#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rollsim/history.hpp"
#include "rollsim/kernel.hpp"
#include "rollsim/potential.hpp"
#include "rollsim/solver_config.hpp"
#include "rollsim/time_function.hpp"

namespace rollsim {

struct Criterion {
  std::string name;
  double value;
  std::string relation;  // "<=" or "<"
  double threshold;
  bool pass;
};

struct RateFit {
  std::string model;  // "eps" or "eps_log_eps"
  double constant;
  double residual;    // root mean square of e − c·model(ε)
};

struct StudyReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<RateFit> fit;
  std::vector<Criterion> criteria;

  bool pass() const;
  void add_criterion(std::string name, double value, std::string relation, double threshold);
  void write_csv(std::ostream& os, int precision = 17) const;
  void write_criteria_csv(std::ostream& os, int precision = 17) const;
  /// One line: "PASS name | criterion value relation threshold | ...".
  std::string summary() const;
};

enum class Method { Smooth, MinimizingMovements };
enum class RateModel { Eps, EpsLogEps };

struct ConvergenceOptions {
  Method method = Method::Smooth;
  Scheme scheme = Scheme::ExplicitEuler;
  double T = 1.0;
  /// Exactly one of dt (shared by all ε) or dt_per_eps (dt = ratio·ε).
  std::optional<double> dt;
  std::optional<double> dt_per_eps;
  /// Errors measured on [window_start, T].
  double window_start = 0.0;
  /// Defaults to Eps for smooth potentials and EpsLogEps otherwise.
  std::optional<RateModel> model;
  bool require_strict_decrease = false;
  std::optional<double> max_final_error;
  /// Bound on (last ratio)/(first ratio) of e(ε)/model(ε).
  std::optional<double> max_ratio_growth;
};

/// Rows (ε, sup|z_ε − z₀|, e/model(ε)); z₀ from the limit equation.
StudyReport convergence_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                              const std::vector<double>& eps_list, const ConvergenceOptions& opt);

struct LongtimeOptions {
  Method method = Method::Smooth;
  Scheme scheme = Scheme::ExplicitEuler;
  double eps = 1.0;
  double dt = 1e-2;
  /// Allowed factor between consecutive offsets sup_{[T/2,T]}|z − γt − z_p(0)|.
  double offset_growth = 1.1;
};

/// Rows (T, |z(T)/T − γ|, sup_{[T/2,T]}|z(t) − γt − z_p(0)|) from one solve up to max(T_list).
StudyReport longtime_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                           const std::vector<double>& T_list, const LongtimeOptions& opt);

/// Rows (v∞, γ numeric for ψ = |u|, gamma_abs, |difference|).
StudyReport velocity_force_sweep(const Kernel& profile, const std::vector<double>& v_grid, double tolerance = 1e-6);

/// Rows (δ, sup|z_smooth[ψ_δ] − z_mm[ψ]|) for a Lipschitz ψ; the gap must not grow as δ decreases.
StudyReport mollification_gap_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v,
                                    const PastData& past, const std::vector<double>& deltas, const SolverConfig& cfg);

/// Uniform grid of n points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Worker count for sweeps: ROLLSIM_THREADS, else the hardware concurrency.
std::size_t sweep_threads();

}  // namespace rollsim
