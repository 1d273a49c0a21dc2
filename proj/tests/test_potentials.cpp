#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "generators.hpp"
#include "rollsim/potential.hpp"

using rollsim::Potential;

namespace {

// Unnormalized bump and a fine trapezoid rule; the integrand is flat to all orders at ±1,
// so the trapezoid rule converges very fast and is independent of the library's Simpson rule.
double raw_bump(double y) { return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0; }

template <class F>
double trapezoid(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

double bump_mass() { return trapezoid(raw_bump, -1.0, 1.0, 20000); }

// ω_δ⋆ψ(u) − ω_δ⋆ψ(0) by direct quadrature.
double convolved(const Potential& psi, double delta, double u) {
  const double c = 1.0 / bump_mass();
  auto conv = [&](double x) {
    return c * trapezoid([&](double y) { return psi.value(x - delta * y) * raw_bump(y); }, -1.0, 1.0, 20000);
  };
  return conv(u) - conv(0.0);
}

// Split at the jumps of ψ′ so the trapezoid rule never straddles a discontinuity.
double convolved_slope(const Potential& psi, double delta, double u) {
  std::vector<double> edges = {-1.0, 1.0};
  for (double j : psi.jump_points())
    if (std::abs((u - j) / delta) < 1.0) edges.push_back((u - j) / delta);
  std::sort(edges.begin(), edges.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hi = edges[k + 1];
    const double mid = 0.5 * (lo + hi);
    const double inner = psi.derivative(u - delta * mid);
    auto piece = [&](double y) {
      const double x = u - delta * y;
      return (y == lo || y == hi ? inner : psi.derivative(x)) * raw_bump(y);
    };
    s += trapezoid(piece, lo, hi, 20000);
  }
  return s / bump_mass();
}

std::vector<Potential> catalog() {
  gen::Rng rng(7);
  std::vector<Potential> out = {Potential::quadratic(), Potential::tether(0.7), Potential::tether(2.0),
                                Potential::absolute_value()};
  for (int i = 0; i < 4; ++i) out.push_back(gen::piecewise(rng, i % 2 == 0));
  out.push_back(rollsim::mollify(Potential::absolute_value(), 0.1));
  out.push_back(rollsim::mollify(gen::piecewise(rng, true), 0.2));
  return out;
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(Potential::quadratic().value(1.0) == 0.5);
  CHECK(Potential::absolute_value().value(-2.0) == 2.0);
  CHECK(Potential::tether(1.0).value(0.0) == 0.0);
  const double l = std::sqrt(5.0) - 1.0;
  CHECK(Potential::tether(1.0).value(2.0) == doctest::Approx(l * l / 2).epsilon(1e-15));
  // ψ ~ u⁴/(8r²) near 0
  CHECK(Potential::tether(1.0).value(1e-3) == doctest::Approx(1e-12 / 8).epsilon(1e-5));
}

TEST_CASE("subdifferentials") {
  const auto a0 = Potential::absolute_value().subdifferential(0.0);
  CHECK(a0.lo == -1.0);
  CHECK(a0.hi == 1.0);
  const auto a2 = Potential::absolute_value().subdifferential(2.0);
  CHECK(a2.lo == 1.0);
  CHECK(a2.hi == 1.0);
  const auto q = Potential::quadratic().subdifferential(3.0);
  CHECK(q.lo == 3.0);
  CHECK(q.hi == 3.0);

  const Potential p = Potential::piecewise({{1.0}, {0.5, 0.25}, {1.0, 0.0}});
  const auto at_knot = p.subdifferential(1.0);
  CHECK(at_knot.lo == doctest::Approx(1.5));
  CHECK(at_knot.hi == doctest::Approx(1.75));
  const auto mirrored = p.subdifferential(-1.0);
  CHECK(mirrored.lo == doctest::Approx(-1.75));
  CHECK(mirrored.hi == doctest::Approx(-1.5));
  CHECK(p.value(2.0) == doctest::Approx(0.5 + 0.5 + 1.75));
  CHECK(p.lipschitz() == doctest::Approx(1.75));
  CHECK(p.derivative_lipschitz() == 1.0);
}

TEST_CASE("lipschitz constants") {
  CHECK(std::isinf(Potential::quadratic().lipschitz()));
  CHECK(Potential::quadratic().derivative_lipschitz() == 1.0);
  CHECK(std::isinf(Potential::tether(1.0).lipschitz()));
  CHECK(Potential::tether(1.0).derivative_lipschitz() == 1.0);
  CHECK(Potential::absolute_value().lipschitz() == 1.0);
  CHECK_FALSE(Potential::absolute_value().smooth());
  CHECK(Potential::tether(1.0).smooth());
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS_AS(Potential::tether(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Potential::piecewise({{1.0, 0.5}, {0, 0, 0}, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Potential::piecewise({{1.0}, {0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Potential::piecewise({{1.0}, {-1, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(rollsim::mollify(Potential::absolute_value(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rollsim::mollify(Potential::tether(1.0), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rollsim::mollify(Potential::piecewise({{1.0}, {0, 1}, {0, 1}}), 0.1), std::invalid_argument);
}

// The library integrates the bump with a fixed 129-point Simpson rule, good to about 1e−7.
TEST_CASE("bump moments match an independent quadrature") {
  const auto& m = rollsim::bump_moments();
  const double mass = bump_mass();
  CHECK(m.normalization == doctest::Approx(1.0 / mass).epsilon(1e-6));
  CHECK(m.abs_first == doctest::Approx(trapezoid([](double y) { return std::abs(y) * raw_bump(y); }, -1, 1, 20000) / mass)
                           .epsilon(1e-6));
  CHECK(m.second == doctest::Approx(trapezoid([](double y) { return y * y * raw_bump(y); }, -1, 1, 20000) / mass)
                        .epsilon(1e-6));
}

TEST_CASE("mollify leaves the quadratic unchanged") {
  const Potential q = rollsim::mollify(Potential::quadratic(), 0.3);
  CHECK(q.kind() == Potential::Kind::Quadratic);
  for (double u : {0.0, 0.5, 1.0, 2.0}) {
    CHECK(q.value(u) == u * u / 2);
    CHECK(convolved(Potential::quadratic(), 0.3, u) == doctest::Approx(u * u / 2).epsilon(1e-10));
  }
}

TEST_CASE("mollified absolute value") {
  for (double delta : {0.5, 0.1, 0.01}) {
    const Potential m = rollsim::mollify(Potential::absolute_value(), delta);
    const double c1 = trapezoid([](double y) { return std::abs(y) * raw_bump(y); }, -1, 1, 20000) / bump_mass();
    CHECK(std::abs(m.value(2 * delta) - (2 * delta - delta * c1)) <= 1e-6 * delta);
    CHECK(m.value(0.0) == 0.0);
    CHECK(m.derivative(0.0) == 0.0);
    CHECK(m.lipschitz() == 1.0);
    CHECK(m.smooth());
    // Inside the neighborhood the table agrees with a direct convolution.
    for (double u : {0.1 * delta, 0.37 * delta, 0.8 * delta}) {
      CHECK(std::abs(m.value(u) - convolved(Potential::absolute_value(), delta, u)) <= 1e-6 * delta);
      CHECK(m.derivative(u) == doctest::Approx(convolved_slope(Potential::absolute_value(), delta, u)).epsilon(1e-6));
      CHECK(m.derivative(-u) == -m.derivative(u));
    }
    CHECK(m.derivative_lipschitz() <= 1.0 / delta * rollsim::bump_moments().derivative_l1 * (1 + 1e-6));
  }
}

TEST_CASE("mollified piecewise potential against direct convolution") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 4; ++trial) {
    const Potential base = gen::piecewise(rng, true);
    const double delta = gen::uniform(rng, 0.05, 0.4);
    const Potential m = rollsim::mollify(base, delta);
    for (int i = 0; i < 12; ++i) {
      const double u = gen::uniform(rng, -4.0, 4.0);
      CHECK(std::abs(m.value(u) - convolved(base, delta, u)) <= 1e-6 * (1 + std::abs(u)));
      CHECK(m.derivative(u) == doctest::Approx(convolved_slope(base, delta, u)).epsilon(1e-5));
    }
    CHECK(m.lipschitz() == doctest::Approx(base.lipschitz()));
  }
}

TEST_CASE("mollification error shrinks with delta and is at most L*delta") {
  gen::Rng rng(5);
  std::vector<Potential> bases = {Potential::absolute_value(), gen::piecewise(rng, true), gen::piecewise(rng, true)};
  for (const Potential& base : bases) {
    double previous = INFINITY;
    for (double delta : {0.5, 0.1, 0.02}) {
      const Potential m = rollsim::mollify(base, delta);
      double sup = 0.0;
      for (int i = 0; i <= 6000; ++i) {
        const double u = -3.0 + 6.0 * i / 6000.0;
        sup = std::max(sup, std::abs(m.value(u) - base.value(u)));
      }
      CHECK(sup <= base.lipschitz() * delta);
      CHECK(sup <= previous);
      previous = sup;
    }
  }
}

TEST_CASE("property: nonnegative, even, convex, monotone subdifferential") {
  gen::Rng rng(2024);
  for (const Potential& psi : catalog()) {
    CAPTURE(psi.name());
    CHECK(psi.value(0.0) == 0.0);
    std::vector<double> us(1000);
    for (auto& u : us) u = gen::uniform(rng, -10.0, 10.0);
    for (double u : us) {
      CHECK(psi.value(u) >= 0.0);
      CHECK(std::abs(psi.value(u) - psi.value(-u)) <= 1e-12);
      const auto s = psi.subdifferential(u);
      const auto r = psi.subdifferential(-u);
      CHECK(s.lo <= s.hi);
      CHECK(r.lo == -s.hi);
      CHECK(r.hi == -s.lo);
    }
    for (int i = 0; i < 1000; ++i) {
      const double u = us[static_cast<std::size_t>(i)];
      const double w = gen::uniform(rng, -10.0, 10.0);
      const double th = gen::uniform(rng, 0.0, 1.0);
      CHECK(psi.value(th * u + (1 - th) * w) <= th * psi.value(u) + (1 - th) * psi.value(w) + 1e-12);
    }
    std::sort(us.begin(), us.end());
    for (std::size_t i = 1; i < us.size(); ++i)
      CHECK(psi.subdifferential(us[i - 1]).hi <= psi.subdifferential(us[i]).lo + 1e-12);
  }
}

TEST_CASE("property: central differences match the derivative") {
  gen::Rng rng(99);
  const double h = 1e-4;
  for (const Potential& psi : catalog()) {
    CAPTURE(psi.name());
    const std::vector<double> jumps = psi.jump_points();
    const double lp = psi.derivative_lipschitz();
    for (int i = 0; i < 500; ++i) {
      const double u = gen::uniform(rng, -5.0, 5.0);
      bool near_jump = false;
      for (double j : jumps) near_jump = near_jump || std::abs(u - j) <= 2 * h;
      if (near_jump) continue;
      const double fd = (psi.value(u + h) - psi.value(u - h)) / (2 * h);
      // Rounding in the two values adds roughly |ψ|·1e−16/h.
      CHECK(std::abs(fd - psi.derivative(u)) <= lp * h + 1e-9 * (1 + psi.value(u)));
    }
  }
}

TEST_CASE("property: increment agrees with value differences") {
  gen::Rng rng(3);
  for (const Potential& psi : catalog()) {
    CAPTURE(psi.name());
    for (int i = 0; i < 300; ++i) {
      const double x = gen::uniform(rng, -6.0, 6.0);
      const double y = gen::uniform(rng, -6.0, 6.0);
      CHECK(psi.increment(x, y) == doctest::Approx(psi.value(x) - psi.value(y)).epsilon(1e-9).scale(1.0));
      const double d = 1e-9;
      CHECK(psi.increment(x + d, x) == doctest::Approx(psi.derivative(x) * d).epsilon(1e-4).scale(1e-15));
    }
  }
}
