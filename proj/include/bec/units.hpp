#pragma once

// Conversion between SI trap/atom parameters and the dimensionless coupling
// used by the rest of the library. Internally everything is in oscillator
// units: lengths in a_ho = sqrt(hbar / (m omega)), energies in hbar omega.

namespace bec {

namespace constants {
/// Reduced Planck constant, J s (CODATA 2018).
inline constexpr double hbar = 1.054571817e-34;
/// Unified atomic mass unit, kg (CODATA 2018).
inline constexpr double atomic_mass_unit = 1.66053906660e-27;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// Isotropic harmonic trap holding N atoms with s-wave scattering length a_s.
struct PhysicalSystem {
  double mass = 0.0;               ///< kg
  double trap_frequency = 0.0;     ///< angular frequency, rad/s
  double scattering_length = 0.0;  ///< m, negative means attractive
  long atom_count = 1;

  /// Throws std::invalid_argument when mass, frequency or atom count are
  /// out of range.
  void validate() const;
};

/// Dimensionless interaction strength g for a condensate in d dimensions.
struct Coupling {
  double g = 0.0;
  int dimension = 3;
};

double oscillator_length(const PhysicalSystem& system);

/// g = 4 pi N a_s / a_ho. Only d = 3 has a physical mapping; any other
/// dimension throws std::invalid_argument (supply g directly there).
Coupling coupling_from_physical(const PhysicalSystem& system, int dimension = 3);

/// Atom number at which the coupling reaches g_critical:
/// N_c = |g_c| a_ho / (4 pi |a_s|). Requires a_s < 0 and g_critical < 0.
double critical_atom_number(const PhysicalSystem& system, double g_critical);

}  // namespace bec
