#pragma once

#include <optional>
#include <vector>

#include "rollsim/time_function.hpp"

namespace rollsim {

/// Linkage-age density ρ(a,t) = profile(a)·m(t), optionally cut off at a < t.
/// Zero for a >= a_max.
class Kernel {
 public:
  enum class Kind { Exponential, TruncatedExponential, Tabulated };

  /// β·e^{−ζa}. a_max defaults to 40/ζ.
  static Kernel exponential(double beta, double zeta, std::optional<double> a_max = {});
  /// β·e^{−ζa}·1{a<t}.
  static Kernel truncated_exponential(double beta, double zeta, std::optional<double> a_max = {});
  /// Piecewise linear profile through (a_i, values_i) with a_0 = 0, zero past the last node.
  static Kernel tabulated(std::vector<double> a_grid, std::vector<double> values,
                          std::optional<TimeFunction> modulation = {}, std::optional<double> a_max = {});

  double operator()(double a, double t) const;
  double profile(double a) const;
  double modulation(double t) const;
  /// ∫₀^∞ aᵖ ρ(a,t) da, p ∈ {0,1,2}.
  double moment(double t, int p) const;
  /// μ∞(t) = ∫₀^t profile. Rejects time-modulated kernels.
  double mu(double t) const;
  double total_mass() const;

  Kind kind() const { return kind_; }
  bool truncated() const { return kind_ == Kind::TruncatedExponential; }
  bool time_dependent() const;
  /// Largest age with nonzero density at time t (a_max, or min(t, a_max) when truncated).
  double support_end(double t) const;
  /// Points where the profile is not smooth (tabulated nodes), for quadrature splitting.
  std::vector<double> profile_breaks() const;
  /// (∂_t + ∂_a)ρ <= 0 and bounded ρ(0,t), known for the built-in kinds only.
  std::optional<bool> transport_nonincreasing() const;

  double a_max() const { return a_max_; }
  double beta() const { return beta_; }
  double zeta() const { return zeta_; }
  const std::vector<double>& a_grid() const { return a_grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<TimeFunction>& modulation_function() const { return modulation_; }

 private:
  Kernel() = default;

  Kind kind_ = Kind::Exponential;
  double beta_ = 0.0;
  double zeta_ = 1.0;
  double a_max_ = 40.0;
  std::vector<double> a_grid_;
  std::vector<double> values_;
  std::optional<TimeFunction> modulation_;
};

}  // namespace rollsim
