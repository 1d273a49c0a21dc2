#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "rollsim/oracles.hpp"
#include "rollsim/solver_mm.hpp"
#include "rollsim/solver_smooth.hpp"

using namespace rollsim;

namespace {

SolverConfig config(double eps, double T, double dt) {
  SolverConfig c;
  c.eps = eps;
  c.T = T;
  c.dt = dt;
  return c;
}

StepEnergy make(const Potential& psi, double previous, double dt, double drive, double eps,
                const std::vector<double>& w, const std::vector<double>& y) {
  StepEnergy e;
  e.psi = &psi;
  e.previous = previous;
  e.dt = dt;
  e.drive = drive;
  e.eps = eps;
  e.weights = w;
  e.anchors = y;
  return e;
}

// Independent minimizer: bisection on the sum of subdifferentials, Lipschitz ψ only.
double minimizer_oracle(const Potential& psi, double previous, double dt, double drive, double eps,
                        const std::vector<double>& w, const std::vector<double>& y) {
  double mass = 0.0;
  for (double x : w) mass += x;
  double lo = previous - dt * (std::abs(drive) + psi.lipschitz() * mass) - 1.0;
  double hi = previous + dt * (std::abs(drive) + psi.lipschitz() * mass) + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double glo = (mid - previous) / dt - drive;
    double ghi = glo;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const SubdiffInterval s = psi.subdifferential((mid - y[j]) / eps);
      glo += w[j] * s.lo;
      ghi += w[j] * s.hi;
    }
    if (glo > 0.0)
      hi = mid;
    else if (ghi < 0.0)
      lo = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("minimize_step examples") {
  const Potential abs = Potential::absolute_value();
  CHECK(minimize_step(make(abs, 0.0, 0.1, 2.0, 1.0, {}, {})) == doctest::Approx(0.2).epsilon(1e-11));
  CHECK(minimize_step(make(abs, 0.0, 0.1, 0.4, 1.0, {1.0}, {0.0})) == 0.0);
  CHECK(minimize_step(make(abs, 0.0, 0.1, 1.5, 1.0, {1.0}, {0.0})) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(minimize_step(make(abs, 0.0, 0.1, -1.5, 1.0, {1.0}, {0.0})) == doctest::Approx(-0.05).epsilon(1e-10));
}

TEST_CASE("minimize_step: soft threshold around a distant anchor") {
  // Minimizer of (w−p)²/(2dt) − v·w + m|w − A|: y = p + dt·v, then shrink toward A by dt·m.
  gen::Rng rng(8);
  const Potential abs = Potential::absolute_value();
  for (int trial = 0; trial < 200; ++trial) {
    const double p = gen::uniform(rng, -1, 1);
    const double A = gen::uniform(rng, -1, 1);
    const double dt = gen::uniform(rng, 0.01, 0.5);
    const double v = gen::uniform(rng, -3, 3);
    const double m = gen::uniform(rng, 0, 2);
    const double y = p + dt * v;
    const double expected = std::abs(y - A) <= dt * m ? A : y - dt * m * (y > A ? 1.0 : -1.0);
    CHECK(std::abs(minimize_step(make(abs, p, dt, v, 1.0, {m}, {A})) - expected) <= 1e-11);
  }
}

TEST_CASE("minimize_step: quadratic closed form") {
  gen::Rng rng(9);
  const Potential q = Potential::quadratic();
  for (int trial = 0; trial < 50; ++trial) {
    const double p = gen::uniform(rng, -1, 1);
    const double dt = gen::uniform(rng, 0.01, 0.5);
    const double v = gen::uniform(rng, -3, 3);
    const double eps = gen::uniform(rng, 0.1, 1.0);
    std::vector<double> w(static_cast<std::size_t>(gen::integer(rng, 1, 40)));
    std::vector<double> y(w.size());
    double sw = 0.0;
    double swy = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = gen::uniform(rng, 0, 0.2);
      y[j] = gen::uniform(rng, -2, 2);
      sw += w[j];
      swy += w[j] * y[j];
    }
    const double expected = (p / dt + v + swy / eps) / (1.0 / dt + sw / eps);
    CHECK(std::abs(minimize_step(make(q, p, dt, v, eps, w, y)) - expected) <= 1e-11 * (1 + std::abs(expected)));
  }
}

TEST_CASE("property: minimize_step matches an independent bisection") {
  gen::Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Potential psi = gen::piecewise(rng, true);
    const double p = gen::uniform(rng, -1, 1);
    const double dt = gen::uniform(rng, 0.001, 0.3);
    const double v = gen::uniform(rng, -3, 3);
    const double eps = gen::uniform(rng, 0.05, 1.0);
    std::vector<double> w(static_cast<std::size_t>(gen::integer(rng, 0, 30)));
    std::vector<double> y(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = gen::uniform(rng, 0, 0.1);
      // Some anchors coincide with the previous state, where ψ′ may jump.
      y[j] = gen::integer(rng, 0, 3) == 0 ? p : gen::uniform(rng, -2, 2);
    }
    const double got = minimize_step(make(psi, p, dt, v, eps, w, y));
    CAPTURE(trial);
    CHECK(std::abs(got - minimizer_oracle(psi, p, dt, v, eps, w, y)) <= 1e-11);
  }
}

TEST_CASE("plastic regime: stops at the predicted position") {
  const double z0 = 0.3;
  const double dt = 1e-3;
  const Trajectory z = solve_mm(Potential::absolute_value(), Kernel::truncated_exponential(1, 1), TimeFunction::constant(0.1),
                                PastData::constant(z0), config(1.0, 0.3, dt));
  CHECK(std::abs(z.back() - z0 - (0.1 - 0.9 * std::log(10.0 / 9.0))) <= 5e-4);
  const double t1 = std::log(10.0 / 9.0);
  for (std::size_t n = 1; n < z.size(); ++n)
    if (z.time(n - 1) >= t1 + 10 * dt) CHECK(std::abs(z[n] - z[n - 1]) / dt <= 1e-6);
}

TEST_CASE("kinematic regime: velocity follows 0.5 + e^{-t}") {
  const double dt = 1e-3;
  const Trajectory z = solve_mm(Potential::absolute_value(), Kernel::truncated_exponential(1, 1), TimeFunction::constant(1.5),
                                PastData::constant(0.0), config(1.0, 5.0, dt));
  double worst = 0.0;
  for (std::size_t n = 1; n < z.size(); ++n) {
    const double t = z.time(n);
    if (t < 0.5) continue;
    worst = std::max(worst, std::abs((z[n] - z[n - 1]) / dt - (0.5 + std::exp(-t))));
  }
  CHECK(worst <= 1e-2);
  CHECK(z.back() == doctest::Approx(kinematic_trajectory(1.5, Kernel::exponential(1, 1), 0.0, 5.0)).epsilon(1e-2));
}

TEST_CASE("property: per-step energy descent and the variational certificate") {
  gen::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Potential psi = trial % 3 == 0 ? Potential::absolute_value() : gen::piecewise(rng, true);
    const Kernel k = gen::kernel(rng);
    const TimeFunction v = gen::drive(rng);
    const PastData past = gen::bounded_past(rng);
    const double eps = gen::uniform(rng, 0.2, 1.0);
    const Trajectory z = solve_mm(psi, k, v, past, config(eps, 1.0, 0.01));
    for (std::size_t n = 1; n <= z.steps(); ++n) {
      const MmStep s = reconstruct_mm_step(k, v, z, n);
      const StepEnergy e = s.energy(psi);
      CHECK(e.energy_increment(z[n], z[n - 1]) <= 1e-14);
    }
    for (int probe = 0; probe < 20; ++probe) {
      const auto n = static_cast<std::size_t>(gen::integer(rng, 1, static_cast<int>(z.steps())));
      const MmStep s = reconstruct_mm_step(k, v, z, n);
      const double zdot = (z[n] - s.previous) / s.dt;
      for (int q = 0; q < 20; ++q) {
        const double w = z[n] + gen::uniform(rng, -2, 2);
        double lhs = (s.drive - zdot) * (w - z[n]);
        double rhs = 0.0;
        for (std::size_t j = 0; j < s.weights.size(); ++j) {
          lhs += eps * s.weights[j] * psi.value((z[n] - s.anchors[j]) / eps);
          rhs += eps * s.weights[j] * psi.value((w - s.anchors[j]) / eps);
        }
        CAPTURE(trial);
        CHECK(lhs <= rhs + 1e-8 * (1 + std::abs(w)));
      }
    }
  }
}

TEST_CASE("property: velocity bound") {
  gen::Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Potential psi = gen::piecewise(rng, true);
    const Kernel k = gen::kernel(rng);
    const TimeFunction v = gen::drive(rng);
    const double T = 1.5;
    const Trajectory z = solve_mm(psi, k, v, gen::bounded_past(rng), config(0.5, T, 0.01));
    const double bound = v.sup_abs(T) + psi.lipschitz() * (k.moment(0.0, 0) + k.moment(INFINITY, 0));
    for (std::size_t n = 1; n < z.size(); ++n) CHECK(std::abs(z[n] - z[n - 1]) / z.dt() <= bound + 1e-9);
  }
}

TEST_CASE("cross-validation with the smooth solver") {
  const Potential q = Potential::quadratic();
  const Kernel k = Kernel::exponential(1, 1);
  const TimeFunction v = TimeFunction::constant(1.0);
  const PastData p = PastData::constant(0.0);
  auto gap = [&](double dt) {
    const Trajectory a = solve_mm(q, k, v, p, config(0.05, 1.0, dt));
    const Trajectory b = solve_smooth(q, k, v, p, config(0.05, 1.0, dt));
    double d = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) d = std::max(d, std::abs(a[n] - b[n]));
    return d;
  };
  const double coarse = gap(1e-3);
  const double fine = gap(5e-4);
  CHECK(coarse <= 0.05);
  CHECK(fine < 0.7 * coarse);
}

TEST_CASE("mm against smooth on mollified potentials: gap shrinks with delta") {
  const Kernel k = Kernel::exponential(1, 1);
  const TimeFunction v = TimeFunction::constant(1.5);
  const PastData p = PastData::constant(0.0);
  const double dt = 1e-3;
  const Trajectory m = solve_mm(Potential::absolute_value(), k, v, p, config(0.5, 1.0, dt));
  double previous = kInfinity;
  for (double delta : {0.2, 0.1, 0.05}) {
    const Trajectory s = solve_smooth(mollify(Potential::absolute_value(), delta), k, v, p, config(0.5, 1.0, dt));
    double d = 0.0;
    for (std::size_t n = 0; n < m.size(); ++n) d = std::max(d, std::abs(m[n] - s[n]));
    CAPTURE(delta);
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("reconstruct_mm_step bounds") {
  Trajectory z(PastData::constant(0.0), 0.1, 1.0);
  z.append(0.0);
  CHECK_THROWS_AS(reconstruct_mm_step(Kernel::exponential(1, 1), TimeFunction::constant(0.0), z, 0), std::out_of_range);
  CHECK_THROWS_AS(reconstruct_mm_step(Kernel::exponential(1, 1), TimeFunction::constant(0.0), z, 2), std::out_of_range);
}
