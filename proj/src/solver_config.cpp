#include "rollsim/solver_config.hpp"

#include <cmath>
#include <stdexcept>

namespace rollsim {

std::size_t SolverConfig::steps() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("solver: eps must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("solver: T must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solver: dt must be > 0");
  if (dt > T) throw std::invalid_argument("solver: dt must not exceed T");
  if (age_step && std::abs(*age_step - dt / eps) > 1e-12 * (dt / eps))
    throw std::invalid_argument("solver: age step must equal dt/eps so delayed samples land on time nodes");
  const double n = std::round(T / dt);
  if (std::abs(n * dt - T) > 1e-9 * T) throw std::invalid_argument("solver: T must be a whole number of steps dt");
  return static_cast<std::size_t>(n);
}

}  // namespace rollsim
