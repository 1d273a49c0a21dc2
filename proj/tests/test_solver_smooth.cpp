#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "rollsim/errors.hpp"
#include "rollsim/solver_smooth.hpp"

using namespace rollsim;

namespace {

Trajectory ramp(double dt, double T) {
  Trajectory z(PastData::linear(1.0, 0.0), dt, 1.0);
  const auto n = static_cast<std::size_t>(std::llround(T / dt));
  for (std::size_t i = 1; i <= n; ++i) z.append(static_cast<double>(i) * dt);
  return z;
}

SolverConfig config(double eps, double T, double dt, Scheme s = Scheme::ExplicitEuler) {
  SolverConfig c;
  c.eps = eps;
  c.T = T;
  c.dt = dt;
  c.scheme = s;
  return c;
}

double sup_diff_on_coarse(const Trajectory& coarse, const Trajectory& fine) {
  const std::size_t ratio = fine.steps() / coarse.steps();
  double d = 0.0;
  for (std::size_t n = 0; n < coarse.size(); ++n) d = std::max(d, std::abs(coarse[n] - fine[n * ratio]));
  return d;
}

}  // namespace

TEST_CASE("memory force examples") {
  Trajectory flat(PastData::constant(2.0), 0.01, 1.0);
  for (int i = 0; i < 10; ++i) flat.append(2.0);
  CHECK(memory_force(Potential::quadratic(), Kernel::exponential(1, 1), flat, 0.1, 1.0) == 0.0);

  const Trajectory z = ramp(1e-3, 5.0);
  // Stretch equals a, so the force is ∫a·e^{−a}da = 1.
  CHECK(memory_force(Potential::quadratic(), Kernel::exponential(1, 1), z, 5.0, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  const Potential m = mollify(Potential::absolute_value(), 0.01);
  CHECK(memory_force(m, Kernel::exponential(1, 1), z, 5.0, 1.0) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("memory force refuses to pick a value on a jump of psi'") {
  const Trajectory z = ramp(0.25, 3.0);
  const Potential p = Potential::piecewise({{1.0}, {0.0, 0.5}, {1.0, 0.0}});
  CHECK_THROWS_AS(memory_force(p, Kernel::exponential(1, 1), z, 3.0, 1.0), BreakpointCollision);
  // Zero stretch at the zero-age node is not a collision.
  const Trajectory r = ramp(0.01, 3.0);
  CHECK(memory_force(Potential::absolute_value(), Kernel::exponential(1, 1), r, 3.0, 1.0) == doctest::Approx(1.0).epsilon(1e-2));
  // A flat trajectory sits on the jump at every age.
  Trajectory flat(PastData::constant(0.0), 0.25, 1.0);
  flat.append(0.0);
  CHECK_THROWS_AS(memory_force(Potential::absolute_value(), Kernel::exponential(1, 1), flat, 0.25, 1.0), BreakpointCollision);
}

TEST_CASE("solver steps agree with the reference memory force") {
  gen::Rng rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    const Potential psi = gen::smooth_potential(rng);
    const Kernel kernel = gen::kernel(rng);
    const TimeFunction v = gen::drive(rng);
    const PastData past = gen::bounded_past(rng);
    const double eps = gen::uniform(rng, 0.3, 1.0);
    const Trajectory z = solve_smooth(psi, kernel, v, past, config(eps, 0.5, 0.01));
    for (std::size_t n = 0; n < z.steps(); n += 7) {
      const double t = z.time(n);
      const double rate = (z[n + 1] - z[n]) / z.dt();
      const double expected = v(t) - memory_force(psi, kernel, z, t, eps);
      CHECK(rate == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("fixed point: zero drive and zero initial stretch") {
  const Trajectory z =
      solve_smooth(Potential::quadratic(), Kernel::exponential(1, 1), TimeFunction::constant(0.0), PastData::constant(1.0),
                   config(1.0, 5.0, 1e-2));
  for (double x : z.values()) CHECK(x == 1.0);
}

TEST_CASE("relaxation to the quadratic final position") {
  const Trajectory z = solve_smooth(Potential::quadratic(), Kernel::exponential(1, 1), TimeFunction::constant(0.0),
                                    PastData::linear(1.0, 1.0), config(1.0, 40.0, 1e-2));
  CHECK(z.back() == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("small eps follows the limit velocity") {
  const Trajectory z = solve_smooth(Potential::quadratic(), Kernel::exponential(1, 1), TimeFunction::constant(1.0),
                                    PastData::constant(0.0), config(0.05, 2.0, 2.5e-4));
  CHECK(std::abs(z.back() - 1.0) <= 0.05);
}

TEST_CASE("precondition failures") {
  const auto k = Kernel::exponential(1, 1);
  const auto v = TimeFunction::constant(1.0);
  const auto p = PastData::constant(0.0);
  CHECK_THROWS_AS(solve_smooth(Potential::absolute_value(), k, v, p, config(1, 1, 0.01)), std::invalid_argument);
  SolverConfig bad = config(0.5, 1.0, 0.01);
  bad.age_step = 0.01;
  CHECK_THROWS_AS(solve_smooth(Potential::quadratic(), k, v, p, bad), std::invalid_argument);
  bad.age_step = 0.02;
  CHECK_NOTHROW(solve_smooth(Potential::quadratic(), k, v, p, bad));
  CHECK_THROWS_AS(solve_smooth(Potential::quadratic(), k, v, p, config(1, 1, 0.3)), std::invalid_argument);
  CHECK_THROWS_AS(solve_smooth(Potential::quadratic(), k, v, p, config(0, 1, 0.01)), std::invalid_argument);
}

TEST_CASE("blow-up is reported as a numerical error") {
  // dt far beyond the explicit stability limit of the memory term.
  CHECK_THROWS_AS(solve_smooth(Potential::quadratic(), Kernel::exponential(1e4, 1), TimeFunction::constant(1.0),
                               PastData::constant(0.0), config(1.0, 200.0, 0.5)),
                  NumericalError);
}

TEST_CASE("property: stability bound on random smooth instances") {
  gen::Rng rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const Potential psi = gen::smooth_potential(rng);
    const Kernel kernel = gen::kernel(rng);
    const TimeFunction v = gen::drive(rng);
    const PastData past = gen::bounded_past(rng);
    const double eps = gen::uniform(rng, 0.2, 1.0);
    const double T = 2.0;
    // Monotone explicit step: dt·L′·m₀/ε <= 1/2.
    const double m0 = kernel.moment(INFINITY, 0) + kernel.moment(0.0, 0);
    double dt = std::min(0.02, 0.5 * eps / (std::max(psi.derivative_lipschitz(), 1e-12) * std::max(m0, 1e-12)));
    dt = T / std::ceil(T / dt);
    const Trajectory z = solve_smooth(psi, kernel, v, past, config(eps, T, dt));
    double sup = 0.0;
    for (double x : z.values()) sup = std::max(sup, std::abs(x));
    CAPTURE(trial);
    CHECK(sup <= past.bound() + v.integral_abs(T) + 10 * dt);
  }
}

TEST_CASE("property: energy dissipation with zero drive") {
  // ψ = u²/2, ρ = e^{−a}, z_p(τ) = τ + 1: u_I(a) = a and ∫ρψ(u_I) = 1.
  const double dt = 1e-2;
  const Trajectory z = solve_smooth(Potential::quadratic(), Kernel::exponential(1, 1), TimeFunction::constant(0.0),
                                    PastData::linear(1.0, 1.0), config(1.0, 40.0, dt));
  double dissipated = 0.0;
  for (std::size_t n = 0; n < z.steps(); ++n) {
    const double zdot = (z[n + 1] - z[n]) / dt;
    dissipated += zdot * zdot * dt;
  }
  CHECK(dissipated <= 1.05);
  const double at2 = std::abs(z.velocity(200));
  const double at5 = std::abs(z.velocity(500));
  const double at10 = std::abs(z.velocity(1000));
  CHECK(at5 < at2);
  CHECK(at10 < at5);

  // A tether on a random exponential kernel, the initial energy by independent quadrature.
  gen::Rng rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const Potential psi = Potential::tether(gen::uniform(rng, 0.3, 1.5));
    const Kernel k = Kernel::exponential(gen::uniform(rng, 0.5, 2.0), gen::uniform(rng, 0.5, 2.0));
    const PastData past = PastData::linear(gen::uniform(rng, 0.5, 2.0), 0.0);
    double initial = 0.0;
    const double h = 1e-3;
    for (double a = 0.5 * h; a < k.a_max(); a += h) initial += k(a, 0.0) * psi.value(past.initial_stretch(a)) * h;
    const double step = 1e-2;
    const Trajectory w = solve_smooth(psi, k, TimeFunction::constant(0.0), past, config(1.0, 20.0, step));
    double sum = 0.0;
    for (std::size_t n = 0; n < w.steps(); ++n) sum += std::pow((w[n + 1] - w[n]) / step, 2) * step;
    CHECK(sum <= 1.05 * initial);
  }
}

TEST_CASE("property: first order in dt for Euler, higher for Heun") {
  const Potential psi = Potential::tether(0.5);
  const Kernel k = Kernel::exponential(1.0, 1.0);
  const TimeFunction v = TimeFunction::relaxing(1.0, 0.5, 1.0);
  const PastData p = PastData::linear(0.5, 0.0);
  auto run = [&](double dt, Scheme s) { return solve_smooth(psi, k, v, p, config(0.5, 2.0, dt, s)); };
  const auto e1 = run(0.02, Scheme::ExplicitEuler);
  const auto e2 = run(0.01, Scheme::ExplicitEuler);
  const auto e3 = run(0.005, Scheme::ExplicitEuler);
  const double r_euler = sup_diff_on_coarse(e1, e2) / sup_diff_on_coarse(e2, e3);
  CHECK(r_euler > 1.6);
  CHECK(r_euler < 2.6);
  const auto h1 = run(0.02, Scheme::Heun);
  const auto h2 = run(0.01, Scheme::Heun);
  const auto h3 = run(0.005, Scheme::Heun);
  CHECK(sup_diff_on_coarse(h1, h2) / sup_diff_on_coarse(h2, h3) > 3.0);
}

TEST_CASE("eps rescaling maps runs onto each other") {
  // z_ε(t) = ε·ẑ(t/ε), where ẑ solves the ε = 1 problem with past z_p(ε·s)/ε, on the same age grid.
  const double eps = 0.25;
  const Potential psi = Potential::tether(0.8);
  const Kernel k = Kernel::exponential(1.5, 1.0);
  const TimeFunction v = TimeFunction::constant(0.7);
  const Trajectory small = solve_smooth(psi, k, v, PastData::linear(2.0, 0.5), config(eps, 1.0, eps * 0.01));
  const Trajectory unit = solve_smooth(psi, k, v, PastData::linear(2.0, 0.5 / eps), config(1.0, 1.0 / eps, 0.01));
  REQUIRE(small.size() == unit.size());
  for (std::size_t n = 0; n < small.size(); ++n) CHECK(small[n] == doctest::Approx(eps * unit[n]).epsilon(1e-12));
}
