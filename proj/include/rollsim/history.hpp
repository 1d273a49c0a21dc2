#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace rollsim {

/// Prescribed past z_p(τ), τ <= 0.
class PastData {
 public:
  enum class Kind { Constant, Linear, Tabulated };

  static PastData constant(double value);
  /// slope·τ + intercept.
  static PastData linear(double slope, double intercept);
  /// Piecewise linear through (τ_i, values_i), τ increasing and ending at 0; constant before τ_0.
  static PastData tabulated(std::vector<double> tau, std::vector<double> values);

  double operator()(double tau) const;
  /// u_I(a) = z_p(0) − z_p(−a).
  double initial_stretch(double a) const;
  double lipschitz() const;
  /// sup|z_p| (infinite for a sloped linear past).
  double bound() const;

  Kind kind() const { return kind_; }
  double slope() const { return slope_; }
  double intercept() const { return intercept_; }
  const std::vector<double>& tau() const { return tau_; }
  const std::vector<double>& values() const { return values_; }

 private:
  PastData() = default;

  Kind kind_ = Kind::Constant;
  double slope_ = 0.0;
  double intercept_ = 0.0;
  std::vector<double> tau_;
  std::vector<double> values_;
};

/// u_I(a) = z_p(0) − z_p(−a).
inline double initial_stretch(const PastData& past, double a) { return past.initial_stretch(a); }

/// Uniformly sampled trajectory Z⁰, Z¹, … on t_n = n·dt, continued by the past for t <= 0.
/// eps is the scaling of the run (0 for the macroscopic limit).
class Trajectory {
 public:
  Trajectory(PastData past, double dt, double eps);

  void append(double z) { values_.push_back(z); }
  void reserve(std::size_t n) { values_.reserve(n); }

  std::size_t size() const { return values_.size(); }
  std::size_t steps() const { return values_.size() - 1; }
  double dt() const { return dt_; }
  double eps() const { return eps_; }
  double time(std::size_t n) const { return static_cast<double>(n) * dt_; }
  double end_time() const { return time(steps()); }
  double operator[](std::size_t n) const { return values_[n]; }
  double back() const { return values_.back(); }
  const std::vector<double>& values() const { return values_; }
  const PastData& past() const { return past_; }

  /// z(s) for any s <= end_time(): the past for s <= 0, linear interpolation otherwise.
  double at(double s) const;
  /// z(t − lag). Throws std::out_of_range when t is beyond the last node.
  double sample_delayed(double t, double lag) const;
  /// Centered differences inside, one-sided at the ends.
  double velocity(std::size_t n) const;

  /// Header t,z,zdot then one row per node.
  void write_csv(std::ostream& os, int precision = 17) const;

 private:
  PastData past_;
  double dt_;
  double eps_;
  std::vector<double> values_;
};

}  // namespace rollsim
