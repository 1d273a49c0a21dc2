#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rollsim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi] of slopes; a single point where ψ is differentiable.
struct SubdiffInterval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  bool is_point() const { return lo == hi; }
  bool contains(double q) const { return lo <= q && q <= hi; }
};

inline SubdiffInterval operator+(SubdiffInterval a, SubdiffInterval b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline SubdiffInterval operator*(double s, SubdiffInterval a) {
  return s >= 0.0 ? SubdiffInterval{s * a.lo, s * a.hi} : SubdiffInterval{s * a.hi, s * a.lo};
}

/// Even convex potential given on u >= 0 by quadratic pieces between knots.
///
/// On (b_i, b_{i+1}) the derivative is ψ′(b_i+) + curvatures[i]·(u − b_i); at each knot
/// the derivative may jump up by jumps[i]. jumps[0] is the jump at 0, so ∂ψ(0) = [−jumps[0], jumps[0]].
/// knots excludes 0 and must be strictly increasing and positive.
struct PiecewiseBranches {
  std::vector<double> knots;
  std::vector<double> jumps;       // size knots.size() + 1
  std::vector<double> curvatures;  // size knots.size() + 1, the last one on (b_N, ∞)
};

class MollifiedTable;

/// Immutable elastic energy ψ of a single linkage. Cheap to copy (mollified tables are shared).
class Potential {
 public:
  enum class Kind { Quadratic, Tether, AbsoluteValue, PiecewiseSmooth, Mollified };

  static Potential quadratic();
  static Potential tether(double radius);
  static Potential absolute_value();
  static Potential piecewise(PiecewiseBranches branches);

  Kind kind() const;
  std::string name() const;

  double value(double u) const;
  /// ψ′(u) where single valued; the midpoint of ∂ψ(u) at a jump.
  double derivative(double u) const;
  SubdiffInterval subdifferential(double u) const;
  /// ψ(x) − ψ(y) without the cancellation of subtracting two nearly equal values.
  double increment(double x, double y) const;

  /// Global Lipschitz constant of ψ (possibly +∞).
  double lipschitz() const;
  /// Lipschitz constant of ψ′ away from jump points.
  double derivative_lipschitz() const;
  bool globally_lipschitz() const { return lipschitz() < kInfinity; }
  /// True when ψ′ is single valued everywhere (no jumps).
  bool smooth() const;

  /// Points u where ∂ψ(u) is a nondegenerate interval, sorted, symmetric about 0.
  std::vector<double> jump_points() const;
  /// Every point where ψ fails to be a single quadratic in a neighborhood (jumps and curvature changes).
  std::vector<double> knots() const;

  double tether_radius() const;
  /// Nonnegative knots as stored in the piecewise form (empty for the closed-form kinds).
  const PiecewiseBranches* branches() const;
  const MollifiedTable* mollified() const;

  struct QuadraticForm {};
  struct TetherForm {
    double radius;
  };
  struct AbsForm {};
  struct PiecewiseForm {
    PiecewiseBranches b;
    std::vector<double> slope_at;  // ψ′(b_i+), i = 0..N with b_0 = 0
    std::vector<double> value_at;  // ψ(b_i)
  };
  struct MollifiedForm {
    std::shared_ptr<const MollifiedTable> table;
  };
  using Form = std::variant<QuadraticForm, TetherForm, AbsForm, PiecewiseForm, MollifiedForm>;

  explicit Potential(Form form) : form_(std::move(form)) {}
  const Form& form() const { return form_; }

 private:
  Form form_;
};

/// Moments of the unit bump ω₁(y) = C·exp(−1/(1−y²)) on (−1, 1), by 129-point Simpson.
struct BumpMoments {
  double normalization;       // C
  double abs_first;           // ∫|y|ω₁
  double second;              // ∫y²ω₁
  double derivative_l1;       // ∫|ω₁′| = 2ω₁(0)
};
const BumpMoments& bump_moments();
double bump_density(double y);

/// Smooth surrogate ψ_δ = ω_δ⋆ψ − ω_δ⋆ψ(0) of a globally Lipschitz convex potential.
/// Quadratic input is returned unchanged.
Potential mollify(const Potential& psi, double delta);

/// ψ_δ on u >= 0: exact formula between tables, tabulated ψ_δ′ near knots.
class MollifiedTable {
 public:
  struct Region {
    double start;
    double step;
    std::vector<double> slope;  // ψ_δ′ at nodes
    std::vector<double> value;  // ψ_δ at nodes
    double offset_after;        // offset of the exact formula on the following gap
  };

  MollifiedTable(Potential::PiecewiseForm base, double delta, std::size_t nodes);

  double delta() const { return delta_; }
  double value(double u) const;
  double derivative(double u) const;
  double increment(double x, double y) const;
  double lipschitz() const { return lipschitz_; }
  double derivative_lipschitz() const { return derivative_lipschitz_; }
  const Potential::PiecewiseForm& base() const { return base_; }
  std::span<const Region> regions() const { return regions_; }

 private:
  double base_value(double u) const;
  double base_slope(double u) const;
  double curvature_at(double u) const;
  double gap_value(double u, double offset) const;
  int region_of(double u) const;  // -1 when u lies in a gap
  double gap_offset(double u) const;

  Potential::PiecewiseForm base_;
  double delta_;
  double smoothing_shift_;  // δ²·m₂/2, multiplied by the local curvature
  double first_offset_;
  std::vector<Region> regions_;
  double lipschitz_;
  double derivative_lipschitz_;
};

}  // namespace rollsim
