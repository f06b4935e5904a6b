#include "bec/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bec {

void PhysicalSystem::validate() const
{
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::invalid_argument("mass must be positive and finite");
  if (!(trap_frequency > 0.0) || !std::isfinite(trap_frequency))
    throw std::invalid_argument("trap frequency must be positive and finite");
  if (!std::isfinite(scattering_length))
    throw std::invalid_argument("scattering length must be finite");
  if (atom_count < 1)
    throw std::invalid_argument("atom count must be at least 1");
}

double oscillator_length(const PhysicalSystem& system)
{
  system.validate();
  return std::sqrt(constants::hbar / (system.mass * system.trap_frequency));
}

Coupling coupling_from_physical(const PhysicalSystem& system, int dimension)
{
  if (dimension != 3)
    throw std::invalid_argument("physical coupling is only defined for d = 3 (got d = " +
                                std::to_string(dimension) + "); pass g directly");
  const double a_ho = oscillator_length(system);
  const double g = 4.0 * constants::pi * static_cast<double>(system.atom_count) *
                   system.scattering_length / a_ho;
  return {g, 3};
}

double critical_atom_number(const PhysicalSystem& system, double g_critical)
{
  const double a_ho = oscillator_length(system);
  if (!(system.scattering_length < 0.0))
    throw std::invalid_argument("no maximum atom number for a non-negative scattering length");
  if (!(g_critical < 0.0))
    throw std::invalid_argument("critical coupling must be negative");
  return std::abs(g_critical) * a_ho / (4.0 * constants::pi * std::abs(system.scattering_length));
}

}  // namespace bec
