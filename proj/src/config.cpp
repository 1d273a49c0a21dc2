#include "rollsim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>

#include "rollsim/errors.hpp"

namespace rollsim {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ConfigError(join(path, it.key()), "unknown field");
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double number(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing required field");
  }
  return as_number(j.at(key), join(path, key));
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return as_number(j.at(key), join(path, key));
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!j.contains(key)) throw ConfigError(p, "missing required field");
  const json& a = j.at(key);
  if (!a.is_array()) throw ConfigError(p, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_number(a[i], p + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& j, const std::string& key, const std::string& path, std::optional<std::string> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing required field");
  }
  if (!j.at(key).is_string()) throw ConfigError(join(path, key), "expected a string");
  return j.at(key).get<std::string>();
}

bool flag(const json& j, const std::string& key, const std::string& path, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return j.at(key).get<bool>();
}

// Domain validation inside constructors reports std::invalid_argument; attach the field path.
template <class F>
auto at_path(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

Scheme parse_scheme(const std::string& s, const std::string& path) {
  if (s == "euler") return Scheme::ExplicitEuler;
  if (s == "heun") return Scheme::Heun;
  throw ConfigError(path, "scheme must be \"euler\" or \"heun\"");
}

const char* scheme_name(Scheme s) { return s == Scheme::Heun ? "heun" : "euler"; }

Method parse_method(const std::string& s, const std::string& path) {
  if (s == "smooth") return Method::Smooth;
  if (s == "mm") return Method::MinimizingMovements;
  throw ConfigError(path, "method must be \"smooth\" or \"mm\"");
}

}  // namespace

Parsed<Potential> parse_potential(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = text(j, "kind", path);
  json r = {{"kind", kind}};
  std::optional<Potential> psi;
  if (kind == "quadratic") {
    allow_keys(j, path, {"kind", "mollify_delta"});
    psi = Potential::quadratic();
  } else if (kind == "abs") {
    allow_keys(j, path, {"kind", "mollify_delta"});
    psi = Potential::absolute_value();
  } else if (kind == "tether") {
    allow_keys(j, path, {"kind", "radius", "mollify_delta"});
    const double radius = number(j, "radius", path, 1.0);
    r["radius"] = radius;
    psi = at_path(join(path, "radius"), [&] { return Potential::tether(radius); });
  } else if (kind == "piecewise") {
    allow_keys(j, path, {"kind", "breakpoints", "jumps", "curvatures", "mollify_delta"});
    PiecewiseBranches b{numbers(j, "breakpoints", path), numbers(j, "jumps", path), numbers(j, "curvatures", path)};
    r["breakpoints"] = b.knots;
    r["jumps"] = b.jumps;
    r["curvatures"] = b.curvatures;
    psi = at_path(path, [&] { return Potential::piecewise(b); });
  } else {
    throw ConfigError(join(path, "kind"), "unknown potential \"" + kind + "\" (quadratic, tether, abs, piecewise)");
  }
  if (const auto delta = optional_number(j, "mollify_delta", path)) {
    r["mollify_delta"] = *delta;
    psi = at_path(join(path, "mollify_delta"), [&] { return mollify(*psi, *delta); });
  }
  return {*psi, r};
}

Parsed<Kernel> parse_kernel(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = text(j, "kind", path);
  json r = {{"kind", kind}};
  if (kind == "exp" || kind == "exp_truncated") {
    allow_keys(j, path, {"kind", "beta", "zeta", "a_max"});
    const double beta = number(j, "beta", path, 1.0);
    const double zeta = number(j, "zeta", path, 1.0);
    const auto a_max = optional_number(j, "a_max", path);
    Kernel k = at_path(path, [&] {
      return kind == "exp" ? Kernel::exponential(beta, zeta, a_max) : Kernel::truncated_exponential(beta, zeta, a_max);
    });
    r["beta"] = beta;
    r["zeta"] = zeta;
    r["a_max"] = k.a_max();
    return {k, r};
  }
  if (kind == "table") {
    allow_keys(j, path, {"kind", "a_grid", "values", "modulation", "a_max"});
    std::vector<double> a = numbers(j, "a_grid", path);
    std::vector<double> values = numbers(j, "values", path);
    r["a_grid"] = a;
    r["values"] = values;
    std::optional<TimeFunction> modulation;
    if (j.contains("modulation")) {
      const std::string mp = join(path, "modulation");
      const json& m = j.at("modulation");
      require_object(m, mp);
      allow_keys(m, mp, {"t", "m"});
      std::vector<double> t = numbers(m, "t", mp);
      std::vector<double> mv = numbers(m, "m", mp);
      modulation = at_path(mp, [&] { return TimeFunction::table(t, mv); });
      r["modulation"] = {{"t", t}, {"m", mv}};
    }
    const auto a_max = optional_number(j, "a_max", path);
    Kernel k = at_path(path, [&] { return Kernel::tabulated(a, values, modulation, a_max); });
    r["a_max"] = k.a_max();
    return {k, r};
  }
  throw ConfigError(join(path, "kind"), "unknown kernel \"" + kind + "\" (exp, exp_truncated, table)");
}

Parsed<PastData> parse_past(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string kind = text(j, "kind", path);
  if (kind == "constant") {
    allow_keys(j, path, {"kind", "value"});
    const double c = number(j, "value", path, 0.0);
    return {PastData::constant(c), {{"kind", kind}, {"value", c}}};
  }
  if (kind == "linear") {
    allow_keys(j, path, {"kind", "slope", "intercept"});
    const double s = number(j, "slope", path);
    const double c = number(j, "intercept", path, 0.0);
    return {PastData::linear(s, c), {{"kind", kind}, {"slope", s}, {"intercept", c}}};
  }
  if (kind == "table") {
    allow_keys(j, path, {"kind", "tau", "values"});
    std::vector<double> tau = numbers(j, "tau", path);
    std::vector<double> values = numbers(j, "values", path);
    PastData p = at_path(path, [&] { return PastData::tabulated(tau, values); });
    return {p, {{"kind", kind}, {"tau", tau}, {"values", values}}};
  }
  throw ConfigError(join(path, "kind"), "unknown past \"" + kind + "\" (constant, linear, table)");
}

Parsed<TimeFunction> parse_time_function(const json& j, const std::string& path) {
  if (j.is_number()) {
    const double c = as_number(j, path);
    return {TimeFunction::constant(c), {{"kind", "constant"}, {"value", c}}};
  }
  require_object(j, path);
  const std::string kind = text(j, "kind", path);
  if (kind == "constant") {
    allow_keys(j, path, {"kind", "value"});
    const double c = number(j, "value", path);
    return {TimeFunction::constant(c), {{"kind", kind}, {"value", c}}};
  }
  if (kind == "table") {
    allow_keys(j, path, {"kind", "t", "values"});
    std::vector<double> t = numbers(j, "t", path);
    std::vector<double> values = numbers(j, "values", path);
    TimeFunction f = at_path(path, [&] { return TimeFunction::table(t, values); });
    return {f, {{"kind", kind}, {"t", t}, {"values", values}}};
  }
  if (kind == "relaxing") {
    allow_keys(j, path, {"kind", "limit", "amplitude", "rate"});
    const double l = number(j, "limit", path);
    const double a = number(j, "amplitude", path);
    const double k = number(j, "rate", path, 1.0);
    TimeFunction f = at_path(path, [&] { return TimeFunction::relaxing(l, a, k); });
    return {f, {{"kind", kind}, {"limit", l}, {"amplitude", a}, {"rate", k}}};
  }
  throw ConfigError(join(path, "kind"), "unknown time function \"" + kind + "\" (constant, table, relaxing)");
}

RunConfig parse_run_config(const json& input) {
  const json& j = (input.is_object() && input.contains("config") && input.contains("command")) ? input.at("config") : input;
  require_object(j, "");
  allow_keys(j, "", {"model", "solver", "output", "study", "oracle"});
  if (!j.contains("model")) throw ConfigError("model", "missing required section");
  const json& m = j.at("model");
  require_object(m, "model");
  allow_keys(m, "model", {"potential", "kernel", "past", "v"});
  auto need = [&](const char* key) -> const json& {
    if (!m.contains(key)) throw ConfigError(join("model", key), "missing required field");
    return m.at(key);
  };
  auto psi = parse_potential(need("potential"), "model.potential");
  auto kernel = parse_kernel(need("kernel"), "model.kernel");
  auto past = m.contains("past") ? parse_past(m.at("past"), "model.past") : parse_past({{"kind", "constant"}}, "model.past");
  auto v = parse_time_function(need("v"), "model.v");

  const json s = j.value("solver", json::object());
  require_object(s, "solver");
  allow_keys(s, "solver", {"eps", "T", "dt", "scheme", "tol_fixedpoint", "age_step"});
  SolverConfig solver;
  solver.eps = number(s, "eps", "solver", 1.0);
  solver.T = number(s, "T", "solver", 1.0);
  solver.dt = number(s, "dt", "solver", 1e-3);
  solver.scheme = parse_scheme(text(s, "scheme", "solver", std::string("euler")), "solver.scheme");
  solver.tol_fixedpoint = number(s, "tol_fixedpoint", "solver", 1e-12);
  solver.age_step = optional_number(s, "age_step", "solver");
  at_path("solver", [&] { return solver.steps(); });

  const json o = j.value("output", json::object());
  require_object(o, "output");
  allow_keys(o, "output", {"path", "precision"});
  OutputSpec output{text(o, "path", "output", std::string()), static_cast<int>(number(o, "precision", "output", 17))};
  if (output.precision < 1 || output.precision > 17) throw ConfigError("output.precision", "must be in 1..17");

  RunConfig cfg{{psi.value, kernel.value, past.value, v.value}, solver, output,
                j.value("study", json::object()), j.value("oracle", json::object()), json::object()};
  json solver_r = {{"eps", solver.eps}, {"T", solver.T}, {"dt", solver.dt}, {"scheme", scheme_name(solver.scheme)},
                   {"tol_fixedpoint", solver.tol_fixedpoint}};
  if (solver.age_step) solver_r["age_step"] = *solver.age_step;
  cfg.resolved = {{"model", {{"potential", psi.resolved}, {"kernel", kernel.resolved}, {"past", past.resolved}, {"v", v.resolved}}},
                  {"solver", solver_r},
                  {"output", {{"path", output.path}, {"precision", output.precision}}}};
  if (!cfg.study.empty()) cfg.resolved["study"] = cfg.study;
  if (!cfg.oracle.empty()) cfg.resolved["oracle"] = cfg.oracle;
  return cfg;
}

RunConfig load_run_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot open " + file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

ConvergenceSetup parse_convergence(RunConfig& cfg) {
  const json& s = cfg.study;
  const std::string p = "study";
  require_object(s, p);
  allow_keys(s, p, {"eps_list", "T", "dt", "dt_per_eps", "method", "scheme", "window_start", "model",
                    "require_strict_decrease", "max_final_error", "max_ratio_growth"});
  ConvergenceSetup out;
  out.eps_list = numbers(s, "eps_list", p);
  auto& o = out.options;
  o.T = number(s, "T", p, cfg.solver.T);
  o.method = parse_method(text(s, "method", p, std::string("smooth")), join(p, "method"));
  o.scheme = parse_scheme(text(s, "scheme", p, std::string(scheme_name(cfg.solver.scheme))), join(p, "scheme"));
  o.dt = optional_number(s, "dt", p);
  o.dt_per_eps = optional_number(s, "dt_per_eps", p);
  if (o.dt && o.dt_per_eps) throw ConfigError(join(p, "dt"), "give dt or dt_per_eps, not both");
  if (!o.dt && !o.dt_per_eps) o.dt = cfg.solver.dt;
  o.window_start = number(s, "window_start", p, 0.0);
  if (s.contains("model")) {
    const std::string m = text(s, "model", p);
    if (m == "eps")
      o.model = RateModel::Eps;
    else if (m == "eps_log_eps")
      o.model = RateModel::EpsLogEps;
    else
      throw ConfigError(join(p, "model"), "rate model must be \"eps\" or \"eps_log_eps\"");
  }
  o.require_strict_decrease = flag(s, "require_strict_decrease", p, false);
  o.max_final_error = optional_number(s, "max_final_error", p);
  o.max_ratio_growth = optional_number(s, "max_ratio_growth", p);

  json r = {{"eps_list", out.eps_list}, {"T", o.T}, {"method", o.method == Method::Smooth ? "smooth" : "mm"},
            {"scheme", scheme_name(o.scheme)}, {"window_start", o.window_start},
            {"require_strict_decrease", o.require_strict_decrease}};
  if (o.dt) r["dt"] = *o.dt;
  if (o.dt_per_eps) r["dt_per_eps"] = *o.dt_per_eps;
  if (o.model) r["model"] = *o.model == RateModel::Eps ? "eps" : "eps_log_eps";
  if (o.max_final_error) r["max_final_error"] = *o.max_final_error;
  if (o.max_ratio_growth) r["max_ratio_growth"] = *o.max_ratio_growth;
  cfg.resolved["study"] = r;
  return out;
}

LongtimeSetup parse_longtime(RunConfig& cfg) {
  const json& s = cfg.study;
  const std::string p = "study";
  require_object(s, p);
  allow_keys(s, p, {"T_list", "method", "scheme", "eps", "dt", "offset_growth"});
  LongtimeSetup out;
  out.T_list = numbers(s, "T_list", p);
  auto& o = out.options;
  o.method = parse_method(text(s, "method", p, std::string("smooth")), join(p, "method"));
  o.scheme = parse_scheme(text(s, "scheme", p, std::string(scheme_name(cfg.solver.scheme))), join(p, "scheme"));
  o.eps = number(s, "eps", p, cfg.solver.eps);
  o.dt = number(s, "dt", p, cfg.solver.dt);
  o.offset_growth = number(s, "offset_growth", p, 1.1);
  cfg.resolved["study"] = {{"T_list", out.T_list}, {"method", o.method == Method::Smooth ? "smooth" : "mm"},
                           {"scheme", scheme_name(o.scheme)}, {"eps", o.eps}, {"dt", o.dt},
                           {"offset_growth", o.offset_growth}};
  return out;
}

}  // namespace rollsim
