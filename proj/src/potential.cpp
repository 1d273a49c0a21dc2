#include "rollsim/potential.hpp"
#include "rollsim/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rollsim {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double tether_length(double u, double r) {
  const double s = std::hypot(u, r);
  return u * u / (s + r);
}

// Index of the quadratic piece containing x >= 0.
std::size_t segment_of(const Potential::PiecewiseForm& p, double x) {
  const auto& k = p.b.knots;
  return static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin());
}

double knot_position(const Potential::PiecewiseForm& p, std::size_t i) { return i == 0 ? 0.0 : p.b.knots[i - 1]; }

double piecewise_value_pos(const Potential::PiecewiseForm& p, double x) {
  const std::size_t i = segment_of(p, x);
  const double d = x - knot_position(p, i);
  return p.value_at[i] + p.slope_at[i] * d + 0.5 * p.b.curvatures[i] * d * d;
}

SubdiffInterval piecewise_subdiff_pos(const Potential::PiecewiseForm& p, double x) {
  if (x == 0.0) return {-p.b.jumps[0], p.b.jumps[0]};
  const std::size_t i = segment_of(p, x);
  const double b = knot_position(p, i);
  const double right = p.slope_at[i] + p.b.curvatures[i] * (x - b);
  if (x == b) return {right - p.b.jumps[i], right};
  return {right, right};
}

double piecewise_increment(const Potential::PiecewiseForm& p, double x, double y) {
  x = std::abs(x);
  y = std::abs(y);
  const std::size_t i = segment_of(p, x);
  if (i != segment_of(p, y)) return piecewise_value_pos(p, x) - piecewise_value_pos(p, y);
  const double b = knot_position(p, i);
  return (x - y) * (p.slope_at[i] + 0.5 * p.b.curvatures[i] * (x + y - 2.0 * b));
}

Potential::PiecewiseForm build_piecewise(PiecewiseBranches b) {
  const std::size_t n = b.knots.size();
  if (b.jumps.size() != n + 1) throw std::invalid_argument("piecewise potential: jumps needs breakpoints+1 entries");
  if (b.curvatures.size() != n + 1)
    throw std::invalid_argument("piecewise potential: curvatures needs breakpoints+1 entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(b.knots[i] > 0.0) || !std::isfinite(b.knots[i]))
      throw std::invalid_argument("piecewise potential: breakpoints must be positive and finite");
    if (i > 0 && !(b.knots[i] > b.knots[i - 1]))
      throw std::invalid_argument("piecewise potential: breakpoints must be strictly increasing");
  }
  for (double j : b.jumps)
    if (!(j >= 0.0) || !std::isfinite(j)) throw std::invalid_argument("piecewise potential: jumps must be >= 0");
  for (double k : b.curvatures)
    if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("piecewise potential: curvatures must be >= 0");

  Potential::PiecewiseForm p{std::move(b), {}, {}};
  p.slope_at.resize(n + 1);
  p.value_at.resize(n + 1);
  p.slope_at[0] = p.b.jumps[0];
  p.value_at[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double h = knot_position(p, i) - knot_position(p, i - 1);
    p.value_at[i] = p.value_at[i - 1] + p.slope_at[i - 1] * h + 0.5 * p.b.curvatures[i - 1] * h * h;
    p.slope_at[i] = p.slope_at[i - 1] + p.b.curvatures[i - 1] * h + p.b.jumps[i];
  }
  return p;
}

double odd(double u, double positive_value) { return u < 0.0 ? -positive_value : positive_value; }

}  // namespace

Potential Potential::quadratic() { return Potential{QuadraticForm{}}; }

Potential Potential::tether(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("tether potential: radius must be > 0");
  return Potential{TetherForm{radius}};
}

Potential Potential::absolute_value() { return Potential{AbsForm{}}; }

Potential Potential::piecewise(PiecewiseBranches branches) { return Potential{build_piecewise(std::move(branches))}; }

Potential::Kind Potential::kind() const { return static_cast<Kind>(form_.index()); }

std::string Potential::name() const {
  switch (kind()) {
    case Kind::Quadratic: return "quadratic";
    case Kind::Tether: return "tether";
    case Kind::AbsoluteValue: return "abs";
    case Kind::PiecewiseSmooth: return "piecewise";
    case Kind::Mollified: return "mollified";
  }
  return "unknown";
}

double Potential::value(double u) const {
  return std::visit(overloaded{
                        [&](const QuadraticForm&) { return 0.5 * u * u; },
                        [&](const TetherForm& t) {
                          const double l = tether_length(u, t.radius);
                          return 0.5 * l * l;
                        },
                        [&](const AbsForm&) { return std::abs(u); },
                        [&](const PiecewiseForm& p) { return piecewise_value_pos(p, std::abs(u)); },
                        [&](const MollifiedForm& m) { return m.table->value(u); },
                    },
                    form_);
}

SubdiffInterval Potential::subdifferential(double u) const {
  return std::visit(overloaded{
                        [&](const QuadraticForm&) { return SubdiffInterval{u, u}; },
                        [&](const TetherForm& t) {
                          const double s = std::hypot(u, t.radius);
                          const double d = tether_length(u, t.radius) * u / s;
                          return SubdiffInterval{d, d};
                        },
                        [&](const AbsForm&) {
                          if (u == 0.0) return SubdiffInterval{-1.0, 1.0};
                          const double s = u > 0.0 ? 1.0 : -1.0;
                          return SubdiffInterval{s, s};
                        },
                        [&](const PiecewiseForm& p) {
                          const SubdiffInterval pos = piecewise_subdiff_pos(p, std::abs(u));
                          return u < 0.0 ? SubdiffInterval{-pos.hi, -pos.lo} : pos;
                        },
                        [&](const MollifiedForm& m) {
                          const double d = m.table->derivative(u);
                          return SubdiffInterval{d, d};
                        },
                    },
                    form_);
}

double Potential::derivative(double u) const { return subdifferential(u).mid(); }

double Potential::increment(double x, double y) const {
  return std::visit(overloaded{
                        [&](const QuadraticForm&) { return 0.5 * (x - y) * (x + y); },
                        [&](const TetherForm& t) {
                          const double r = t.radius;
                          const double sx = std::hypot(x, r);
                          const double sy = std::hypot(y, r);
                          const double dl = (x - y) * (x + y) / (sx + sy);
                          return 0.5 * dl * (tether_length(x, r) + tether_length(y, r));
                        },
                        [&](const AbsForm&) { return std::abs(x) - std::abs(y); },
                        [&](const PiecewiseForm& p) { return piecewise_increment(p, x, y); },
                        [&](const MollifiedForm& m) { return m.table->increment(x, y); },
                    },
                    form_);
}

double Potential::lipschitz() const {
  return std::visit(overloaded{
                        [](const QuadraticForm&) { return kInfinity; },
                        [](const TetherForm&) { return kInfinity; },
                        [](const AbsForm&) { return 1.0; },
                        [](const PiecewiseForm& p) {
                          return p.b.curvatures.back() > 0.0 ? kInfinity : p.slope_at.back();
                        },
                        [](const MollifiedForm& m) { return m.table->lipschitz(); },
                    },
                    form_);
}

double Potential::derivative_lipschitz() const {
  return std::visit(overloaded{
                        [](const QuadraticForm&) { return 1.0; },
                        // ψ″ = 1 − r³/(u²+r²)^{3/2} <= 1
                        [](const TetherForm&) { return 1.0; },
                        [](const AbsForm&) { return 0.0; },
                        [](const PiecewiseForm& p) {
                          return *std::max_element(p.b.curvatures.begin(), p.b.curvatures.end());
                        },
                        [](const MollifiedForm& m) { return m.table->derivative_lipschitz(); },
                    },
                    form_);
}

bool Potential::smooth() const {
  switch (kind()) {
    case Kind::AbsoluteValue: return false;
    case Kind::PiecewiseSmooth: {
      const auto& j = std::get<PiecewiseForm>(form_).b.jumps;
      return std::all_of(j.begin(), j.end(), [](double x) { return x == 0.0; });
    }
    default: return true;
  }
}

std::vector<double> Potential::jump_points() const {
  std::vector<double> out;
  if (kind() == Kind::AbsoluteValue) out.push_back(0.0);
  if (const auto* p = std::get_if<PiecewiseForm>(&form_)) {
    if (p->b.jumps[0] > 0.0) out.push_back(0.0);
    for (std::size_t i = 0; i < p->b.knots.size(); ++i)
      if (p->b.jumps[i + 1] > 0.0) {
        out.push_back(p->b.knots[i]);
        out.push_back(-p->b.knots[i]);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> Potential::knots() const {
  std::vector<double> out;
  if (kind() == Kind::AbsoluteValue) out.push_back(0.0);
  if (const auto* p = std::get_if<PiecewiseForm>(&form_)) {
    if (p->b.jumps[0] > 0.0) out.push_back(0.0);
    for (double b : p->b.knots) {
      out.push_back(b);
      out.push_back(-b);
    }
  }
  if (const auto* m = std::get_if<MollifiedForm>(&form_)) {
    for (const auto& r : m->table->regions()) {
      const double end = r.start + r.step * static_cast<double>(r.slope.size() - 1);
      for (double e : {r.start, end}) {
        out.push_back(e);
        out.push_back(-e);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double Potential::tether_radius() const {
  if (const auto* t = std::get_if<TetherForm>(&form_)) return t->radius;
  throw std::logic_error("tether_radius: not a tether potential");
}

const PiecewiseBranches* Potential::branches() const {
  if (const auto* p = std::get_if<PiecewiseForm>(&form_)) return &p->b;
  return nullptr;
}

const MollifiedTable* Potential::mollified() const {
  if (const auto* m = std::get_if<MollifiedForm>(&form_)) return m->table.get();
  return nullptr;
}

// ---------------------------------------------------------------------------
// Mollification

double bump_density(double y) {
  if (!(std::abs(y) < 1.0)) return 0.0;
  return bump_moments().normalization * std::exp(-1.0 / (1.0 - y * y));
}

const BumpMoments& bump_moments() {
  static const BumpMoments moments = [] {
    auto raw = [](double y) { return std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0; };
    const double mass = quad::simpson(raw, -1.0, 1.0, 129);
    const double c = 1.0 / mass;
    BumpMoments m{};
    m.normalization = c;
    m.abs_first = c * quad::simpson([&](double y) { return std::abs(y) * raw(y); }, -1.0, 1.0, 129);
    m.second = c * quad::simpson([&](double y) { return y * y * raw(y); }, -1.0, 1.0, 129);
    m.derivative_l1 = 2.0 * c * raw(0.0);
    return m;
  }();
  return moments;
}

namespace {

Potential::PiecewiseForm as_piecewise(const Potential& psi) {
  if (psi.kind() == Potential::Kind::AbsoluteValue) return build_piecewise({{}, {1.0}, {0.0}});
  if (const auto* p = std::get_if<Potential::PiecewiseForm>(&psi.form())) return *p;
  throw std::invalid_argument("mollify: potential '" + psi.name() + "' is not globally Lipschitz");
}

// Pool-adjacent-violators: least-squares nondecreasing fit, in place.
void isotonic(std::vector<double>& y) {
  std::vector<double> level;
  std::vector<std::size_t> count;
  for (double v : y) {
    level.push_back(v);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const std::size_t c = count.back() + count[count.size() - 2];
      const double l = (level.back() * count.back() + level[level.size() - 2] * count[count.size() - 2]) / c;
      level.pop_back();
      count.pop_back();
      level.back() = l;
      count.back() = c;
    }
  }
  std::size_t k = 0;
  for (std::size_t b = 0; b < level.size(); ++b)
    for (std::size_t i = 0; i < count[b]; ++i) y[k++] = level[b];
}

}  // namespace

Potential mollify(const Potential& psi, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("mollify: delta must be > 0");
  if (psi.kind() == Potential::Kind::Quadratic) return psi;
  if (psi.kind() == Potential::Kind::Mollified) throw std::invalid_argument("mollify: potential is already mollified");
  auto base = as_piecewise(psi);
  if (base.b.curvatures.back() > 0.0)
    throw std::invalid_argument("mollify: piecewise potential with unbounded slope is not globally Lipschitz");
  return Potential{Potential::MollifiedForm{std::make_shared<const MollifiedTable>(std::move(base), delta, 4096)}};
}

MollifiedTable::MollifiedTable(Potential::PiecewiseForm base, double delta, std::size_t nodes)
    : base_(std::move(base)), delta_(delta) {
  const BumpMoments& bump = bump_moments();
  smoothing_shift_ = 0.5 * delta * delta * bump.second;
  first_offset_ = -base_.b.curvatures[0] * smoothing_shift_;

  // Knots on the whole line, for splitting the convolution integral.
  std::vector<double> line_knots;
  if (base_.b.jumps[0] > 0.0) line_knots.push_back(0.0);
  for (double b : base_.b.knots) {
    line_knots.push_back(b);
    line_knots.push_back(-b);
  }

  std::vector<std::pair<double, double>> hoods;
  if (base_.b.jumps[0] > 0.0) hoods.emplace_back(0.0, delta);
  for (double b : base_.b.knots) hoods.emplace_back(std::max(0.0, b - delta), b + delta);
  std::sort(hoods.begin(), hoods.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& h : hoods) {
    if (!merged.empty() && h.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, h.second);
    else
      merged.push_back(h);
  }

  auto convolved_slope = [&](double u) {
    std::vector<double> cuts{-1.0, 1.0};
    for (double c : line_knots) {
      const double y = (u - c) / delta;
      if (y > -1.0 && y < 1.0) cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] <= cuts[k]) continue;
      // Evaluate ψ′ just inside each piece so a cut that lands on a knot picks the one-sided value.
      const double lo = cuts[k];
      const double hi = cuts[k + 1];
      s += quad::simpson(
          [&](double y) {
            const double yy = std::clamp(y, lo + 1e-14 * (hi - lo), hi - 1e-14 * (hi - lo));
            return base_slope(u - delta * yy) * bump_density(y);
          },
          lo, hi, 129);
    }
    return s;
  };

  double offset = first_offset_;
  derivative_lipschitz_ = *std::max_element(base_.b.curvatures.begin(), base_.b.curvatures.end());
  for (const auto& [s, e] : merged) {
    Region r;
    r.start = s;
    r.step = (e - s) / static_cast<double>(nodes - 1);
    r.slope.resize(nodes);
    for (std::size_t i = 1; i + 1 < nodes; ++i) r.slope[i] = convolved_slope(s + r.step * static_cast<double>(i));
    const double left = s == 0.0 ? 0.0 : base_slope(s);
    const double right = base_slope(e);
    r.slope.front() = left;
    r.slope.back() = right;
    isotonic(r.slope);
    for (double& v : r.slope) v = std::clamp(v, left, right);
    r.slope.front() = left;
    r.slope.back() = right;

    r.value.resize(nodes);
    r.value[0] = s == 0.0 ? 0.0 : gap_value(s, offset);
    for (std::size_t i = 1; i < nodes; ++i)
      r.value[i] = r.value[i - 1] + 0.5 * r.step * (r.slope[i - 1] + r.slope[i]);
    r.offset_after = r.value.back() - base_value(e) - curvature_at(e) * smoothing_shift_;
    offset = r.offset_after;
    for (std::size_t i = 0; i + 1 < nodes; ++i)
      derivative_lipschitz_ = std::max(derivative_lipschitz_, (r.slope[i + 1] - r.slope[i]) / r.step);
    regions_.push_back(std::move(r));
  }
  lipschitz_ = base_.slope_at.back();
}

double MollifiedTable::base_value(double u) const { return piecewise_value_pos(base_, std::abs(u)); }

double MollifiedTable::base_slope(double u) const {
  const SubdiffInterval pos = piecewise_subdiff_pos(base_, std::abs(u));
  return odd(u, pos.mid());
}

double MollifiedTable::curvature_at(double u) const { return base_.b.curvatures[segment_of(base_, std::abs(u))]; }

double MollifiedTable::gap_value(double u, double offset) const {
  return base_value(u) + curvature_at(u) * smoothing_shift_ + offset;
}

int MollifiedTable::region_of(double x) const {
  for (std::size_t k = 0; k < regions_.size(); ++k) {
    const auto& r = regions_[k];
    const double end = r.start + r.step * static_cast<double>(r.slope.size() - 1);
    if (x < r.start) return -1;
    if (x <= end) return static_cast<int>(k);
  }
  return -1;
}

double MollifiedTable::gap_offset(double x) const {
  double offset = first_offset_;
  for (const auto& r : regions_) {
    if (x < r.start) break;
    offset = r.offset_after;
  }
  return offset;
}

namespace {
struct CellPos {
  std::size_t i;
  double t;
};
CellPos cell_of(const MollifiedTable::Region& r, double x) {
  const std::size_t last = r.slope.size() - 2;
  auto i = static_cast<std::size_t>(std::max(0.0, std::floor((x - r.start) / r.step)));
  i = std::min(i, last);
  return {i, x - (r.start + r.step * static_cast<double>(i))};
}
double cell_primitive(const MollifiedTable::Region& r, std::size_t i, double t) {
  return t * r.slope[i] + 0.5 * t * t * (r.slope[i + 1] - r.slope[i]) / r.step;
}
}  // namespace

double MollifiedTable::value(double u) const {
  const double x = std::abs(u);
  const int k = region_of(x);
  if (k < 0) return gap_value(x, gap_offset(x));
  const auto& r = regions_[static_cast<std::size_t>(k)];
  const auto [i, t] = cell_of(r, x);
  return r.value[i] + cell_primitive(r, i, t);
}

double MollifiedTable::derivative(double u) const {
  const double x = std::abs(u);
  if (x == 0.0) return 0.0;
  const int k = region_of(x);
  if (k < 0) return odd(u, base_slope(x));
  const auto& r = regions_[static_cast<std::size_t>(k)];
  const auto [i, t] = cell_of(r, x);
  return odd(u, r.slope[i] + (r.slope[i + 1] - r.slope[i]) * t / r.step);
}

double MollifiedTable::increment(double x, double y) const {
  x = std::abs(x);
  y = std::abs(y);
  const int kx = region_of(x);
  const int ky = region_of(y);
  if (kx < 0 && ky < 0 && gap_offset(x) == gap_offset(y) && segment_of(base_, x) == segment_of(base_, y))
    return piecewise_increment(base_, x, y);
  if (kx >= 0 && kx == ky) {
    const auto& r = regions_[static_cast<std::size_t>(kx)];
    const auto cx = cell_of(r, x);
    const auto cy = cell_of(r, y);
    if (cx.i == cy.i) {
      const double dt = cx.t - cy.t;
      return dt * (r.slope[cx.i] + 0.5 * (cx.t + cy.t) * (r.slope[cx.i + 1] - r.slope[cx.i]) / r.step);
    }
  }
  return value(x) - value(y);
}

}  // namespace rollsim
