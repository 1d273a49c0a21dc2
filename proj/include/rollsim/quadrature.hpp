#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace rollsim::quad {

/// Composite Simpson rule with `points` nodes (odd, >= 3) on [a, b].
template <class F>
double simpson(F&& f, double a, double b, int points = 129) {
  if (points < 3 || points % 2 == 0) throw std::invalid_argument("simpson: need an odd node count >= 3");
  const int intervals = points - 1;
  const double h = (b - a) / intervals;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < intervals; ++i) {
    const double y = f(a + i * h);
    (i % 2 ? odd : even) += y;
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

/// Composite 10-point Gauss-Legendre on [a, b], with panels no wider than `max_panel`
/// and additionally split at every interior point of `cuts`.
template <class F>
double gauss_panels(F&& f, double a, double b, std::span<const double> cuts, double max_panel) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges;
  edges.reserve(cuts.size() + 2);
  edges.push_back(a);
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  using rule = boost::math::quadrature::gauss<double, 10>;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k];
    const double hi = edges[k + 1];
    const auto panels = static_cast<int>(std::max(1.0, std::ceil((hi - lo) / max_panel)));
    const double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double x0 = lo + p * w;
      const double x1 = (p + 1 == panels) ? hi : x0 + w;
      total += rule::integrate(f, x0, x1);
    }
  }
  return total;
}

template <class F>
double gauss_panels(F&& f, double a, double b, double max_panel) {
  return gauss_panels(std::forward<F>(f), a, b, std::span<const double>{}, max_panel);
}

/// Composite trapezoid with `n` uniform intervals on [a, b].
template <class F>
double trapezoid(F&& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) s += f(a + static_cast<double>(i) * h);
  return s * h;
}

}  // namespace rollsim::quad
