#pragma once

#include <stdexcept>
#include <string>

namespace rollsim {

/// Raised when an iteration cannot produce a finite, bracketed answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ψ′ is multivalued at the requested stretch; the smooth path refuses to pick a value.
class BreakpointCollision : public std::domain_error {
 public:
  BreakpointCollision(double stretch, const std::string& where)
      : std::domain_error(where + ": stretch " + std::to_string(stretch) +
                          " lands on a jump of psi'; mollify the potential or use the mm solver"),
        stretch_(stretch) {}

  double stretch() const noexcept { return stretch_; }

 private:
  double stretch_;
};

/// Invalid configuration field. `path()` is a dotted JSON path such as "model.kernel.zeta".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace rollsim
