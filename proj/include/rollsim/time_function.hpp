#pragma once

#include <vector>

namespace rollsim {

/// Scalar function of time used for the drive v(t) and for kernel modulation m(t).
class TimeFunction {
 public:
  enum class Kind { Constant, Table, Relaxing };

  static TimeFunction constant(double value);
  /// Piecewise linear through (t_i, values_i); constant beyond the ends.
  static TimeFunction table(std::vector<double> t, std::vector<double> values);
  /// limit + amplitude·exp(−rate·t).
  static TimeFunction relaxing(double limit, double amplitude, double rate);

  double operator()(double t) const;

  Kind kind() const { return kind_; }
  bool is_constant() const;
  /// Value as t → ∞.
  double limit() const;
  double sup_abs(double T) const;
  /// ∫₀^T |f|.
  double integral_abs(double T) const;

  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& values() const { return values_; }
  double amplitude() const { return amplitude_; }
  double rate() const { return rate_; }

 private:
  TimeFunction() = default;

  Kind kind_ = Kind::Constant;
  double limit_ = 0.0;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
  std::vector<double> t_;
  std::vector<double> values_;
};

}  // namespace rollsim
