#include "rollsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rollsim/oracles.hpp"
#include "rollsim/solver_limit.hpp"
#include "rollsim/solver_mm.hpp"
#include "rollsim/solver_smooth.hpp"

namespace rollsim {
namespace {

template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers = std::min(n, sweep_threads());
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Trajectory run(Method method, const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
               const SolverConfig& cfg) {
  return method == Method::Smooth ? solve_smooth(psi, kernel, v, past, cfg) : solve_mm(psi, kernel, v, past, cfg);
}

// cur/prev with the convention that two vanishing values are in ratio 0.
double growth(double prev, double cur) {
  constexpr double tiny = 1e-14;
  if (prev > tiny) return cur / prev;
  return cur > tiny ? std::numeric_limits<double>::infinity() : 0.0;
}

double rate_model(RateModel m, double eps) { return m == RateModel::Eps ? eps : eps * std::abs(std::log(eps)); }

void sort_rows(StudyReport& r) {
  std::sort(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
}

}  // namespace

std::size_t sweep_threads() {
  if (const char* env = std::getenv("ROLLSIM_THREADS"); env && *env) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

bool StudyReport::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

void StudyReport::add_criterion(std::string cname, double value, std::string relation, double threshold) {
  const bool ok = relation == "<" ? value < threshold : value <= threshold;
  criteria.push_back({std::move(cname), value, std::move(relation), threshold, ok});
}

void StudyReport::write_csv(std::ostream& os, int precision) const {
  const auto old = os.precision(precision);
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  os.precision(old);
}

void StudyReport::write_criteria_csv(std::ostream& os, int precision) const {
  const auto old = os.precision(precision);
  os << "criterion,value,relation,threshold,pass\n";
  for (const auto& c : criteria)
    os << c.name << ',' << c.value << ',' << c.relation << ',' << c.threshold << ',' << (c.pass ? "true" : "false")
       << '\n';
  if (fit) os << "fit_" << fit->model << "," << fit->constant << ",rms," << fit->residual << ",\n";
  os.precision(old);
}

std::string StudyReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (pass() ? "PASS " : "FAIL ") << name;
  for (const auto& c : criteria)
    os << " | " << c.name << ' ' << c.value << ' ' << c.relation << ' ' << c.threshold << (c.pass ? "" : " (failed)");
  if (criteria.empty()) os << " | no criteria";
  return os.str();
}

StudyReport convergence_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                              const std::vector<double>& eps_list, const ConvergenceOptions& opt) {
  if (eps_list.empty()) throw std::invalid_argument("convergence_study: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("convergence_study: eps values must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("convergence_study: eps list must be strictly decreasing");
  }
  if (opt.dt.has_value() == opt.dt_per_eps.has_value())
    throw std::invalid_argument("convergence_study: give exactly one of dt and dt_per_eps");
  const RateModel model = opt.model.value_or(psi.smooth() ? RateModel::Eps : RateModel::EpsLogEps);

  // Limit solution z₀: closed form for frozen data, otherwise a fine trapezoid integration.
  std::optional<double> gamma;
  std::optional<Trajectory> limit;
  if (v.is_constant() && !kernel.time_dependent())
    gamma = limit_velocity(psi, kernel, v(0.0), 0.0);
  else
    limit = integrate_limit(psi, kernel, v, past, opt.T, opt.T / 4000.0);
  const double z0 = past(0.0);
  auto reference = [&](double t) { return gamma ? z0 + *gamma * t : limit->at(t); };

  std::vector<double> errors(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t i) {
    SolverConfig cfg;
    cfg.eps = eps_list[i];
    cfg.T = opt.T;
    cfg.dt = opt.dt ? *opt.dt : *opt.dt_per_eps * eps_list[i];
    cfg.scheme = opt.scheme;
    const Trajectory z = run(opt.method, psi, kernel, v, past, cfg);
    double e = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n)
      if (z.time(n) >= opt.window_start - 1e-12) e = std::max(e, std::abs(z[n] - reference(z.time(n))));
    errors[i] = e;
  });

  StudyReport r;
  r.name = "convergence";
  r.columns = {"param", "metric", model == RateModel::Eps ? "metric_over_eps" : "metric_over_eps_log_eps"};
  std::vector<double> ratios(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    ratios[i] = errors[i] / rate_model(model, eps_list[i]);
    r.rows.push_back({eps_list[i], errors[i], ratios[i]});
  }
  sort_rows(r);
  if (eps_list.size() < 2) return r;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double m = rate_model(model, eps_list[i]);
    num += errors[i] * m;
    den += m * m;
  }
  const double c = den > 0.0 ? num / den : 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const double d = errors[i] - c * rate_model(model, eps_list[i]);
    rss += d * d;
  }
  r.fit = RateFit{model == RateModel::Eps ? "eps" : "eps_log_eps", c, std::sqrt(rss / static_cast<double>(eps_list.size()))};

  const bool declared = opt.require_strict_decrease || opt.max_final_error || opt.max_ratio_growth;
  const bool strict = declared ? opt.require_strict_decrease : model == RateModel::Eps;
  std::optional<double> ratio_bound = opt.max_ratio_growth;
  if (!declared && model == RateModel::EpsLogEps) ratio_bound = 1.2;
  if (strict) {
    double worst = 0.0;
    for (std::size_t i = 1; i < errors.size(); ++i) worst = std::max(worst, growth(errors[i - 1], errors[i]));
    r.add_criterion("error_step_ratio_max", worst, "<", 1.0);
  }
  if (opt.max_final_error) r.add_criterion("final_error", errors.back(), "<=", *opt.max_final_error);
  if (ratio_bound.has_value())
    r.add_criterion("rate_ratio_last_over_first", growth(ratios.front(), ratios.back()), "<=", ratio_bound.value_or(1.2));
  return r;
}

StudyReport longtime_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v, const PastData& past,
                           const std::vector<double>& T_list, const LongtimeOptions& opt) {
  if (T_list.empty()) throw std::invalid_argument("longtime_study: empty T list");
  std::vector<double> Ts = T_list;
  std::sort(Ts.begin(), Ts.end());
  if (!(Ts.front() > 0.0)) throw std::invalid_argument("longtime_study: T values must be > 0");

  const double gamma = asymptotic_velocity({psi, kernel, v.limit()});
  SolverConfig cfg;
  cfg.eps = opt.eps;
  cfg.T = Ts.back();
  cfg.dt = opt.dt;
  cfg.scheme = opt.scheme;
  const Trajectory z = run(opt.method, psi, kernel, v, past, cfg);
  const double z0 = past(0.0);

  StudyReport r;
  r.name = "longtime";
  r.columns = {"param", "metric", "offset_sup"};
  std::vector<double> vel;
  std::vector<double> off;
  for (double T : Ts) {
    const double steps = std::round(T / opt.dt);
    if (std::abs(steps * opt.dt - T) > 1e-9 * T)
      throw std::invalid_argument("longtime_study: every T must be a whole number of steps dt");
    const auto N = static_cast<std::size_t>(steps);
    double sup = 0.0;
    for (std::size_t n = N / 2; n <= N; ++n) sup = std::max(sup, std::abs(z[n] - gamma * z.time(n) - z0));
    vel.push_back(std::abs(z[N] / T - gamma));
    off.push_back(sup);
    r.rows.push_back({T, vel.back(), sup});
  }
  if (Ts.size() < 2) return r;
  double worst_vel = 0.0;
  double worst_off = 0.0;
  for (std::size_t i = 1; i < Ts.size(); ++i) {
    worst_vel = std::max(worst_vel, growth(vel[i - 1], vel[i]));
    worst_off = std::max(worst_off, growth(off[i - 1], off[i]));
  }
  r.add_criterion("velocity_error_growth_max", worst_vel, "<=", 1.0);
  r.add_criterion("offset_growth_max", worst_off, "<=", opt.offset_growth);
  return r;
}

StudyReport velocity_force_sweep(const Kernel& profile, const std::vector<double>& v_grid, double tolerance) {
  const double mu = profile.total_mass();
  const Potential abs = Potential::absolute_value();
  std::vector<double> numeric(v_grid.size());
  parallel_for(v_grid.size(), [&](std::size_t i) { numeric[i] = asymptotic_velocity({abs, profile, v_grid[i]}); });

  StudyReport r;
  r.name = "velocity_force";
  r.columns = {"param", "metric", "gamma_closed_form", "difference"};
  double worst = 0.0;
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    const double closed = gamma_abs(v_grid[i], mu);
    const double diff = std::abs(numeric[i] - closed);
    worst = std::max(worst, diff);
    r.rows.push_back({v_grid[i], numeric[i], closed, diff});
  }
  sort_rows(r);
  r.add_criterion("max_difference", worst, "<=", tolerance);
  return r;
}

StudyReport mollification_gap_study(const Potential& psi, const Kernel& kernel, const TimeFunction& v,
                                    const PastData& past, const std::vector<double>& deltas, const SolverConfig& cfg) {
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("mollification_gap_study: deltas must be strictly decreasing");
  const Trajectory reference = solve_mm(psi, kernel, v, past, cfg);
  std::vector<double> gaps(deltas.size());
  parallel_for(deltas.size(), [&](std::size_t i) {
    const Trajectory z = solve_smooth(mollify(psi, deltas[i]), kernel, v, past, cfg);
    double g = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) g = std::max(g, std::abs(z[n] - reference[n]));
    gaps[i] = g;
  });
  StudyReport r;
  r.name = "mollification_gap";
  r.columns = {"param", "metric"};
  for (std::size_t i = 0; i < deltas.size(); ++i) r.rows.push_back({deltas[i], gaps[i]});
  sort_rows(r);
  double worst = 0.0;
  for (std::size_t i = 1; i < gaps.size(); ++i) worst = std::max(worst, growth(gaps[i - 1], gaps[i]));
  if (gaps.size() > 1) r.add_criterion("gap_growth_max", worst, "<", 1.0);
  return r;
}

}  // namespace rollsim
