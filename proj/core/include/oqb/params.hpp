#pragma once

#include <array>

namespace oqb {

/// Periodic chain of N monomers with on-site energy omega, nearest-neighbour
/// hopping J and exciton-exciton interaction A. All energies are in units
/// where omega sets the scale (omega = 1 by default).
struct AggregateParams {
  int n_sites = 14;
  double omega = 1.0;
  double hopping = -0.2;
  double interaction = 0.0;

  void validate() const;
};

struct CavityParams {
  double omega_c = 1.0;
  int n_photons = 0;

  void validate() const;
};

/// How the light-matter coupling g is held fixed as N changes.
///  - kDensity: the cavity grows with the aggregate, value = g*sqrt(N)/omega.
///  - kFixedCavity: the cavity length is fixed, value = g/omega.
/// The cavity length itself never enters the numerics; the mode choice is
/// its only trace.
enum class Normalization { kDensity, kFixedCavity };

/// Only a step turn-on at t = 0+ is supported.
enum class TurnOn { kStep };

struct CouplingSpec {
  Normalization mode = Normalization::kDensity;
  double value = 0.5;
  TurnOn turn_on = TurnOn::kStep;

  static CouplingSpec density(double g_sqrt_n_over_omega) {
    return {Normalization::kDensity, g_sqrt_n_over_omega, TurnOn::kStep};
  }
  static CouplingSpec fixed_cavity(double g_over_omega) {
    return {Normalization::kFixedCavity, g_over_omega, TurnOn::kStep};
  }
};

/// Resolved coupling strength g (energy units) for the given aggregate.
double resolve_coupling(const CouplingSpec& spec, const AggregateParams& params);

using Vec3 = std::array<double, 3>;

struct DipoleGeometry {
  Vec3 transition_dipole{};
  Vec3 static_dipole{};
  Vec3 displacement{};
  double eps0 = 1.0;
};

struct DipoleCouplings {
  double hopping = 0.0;
  double interaction = 0.0;
};

/// Point-dipole expressions for J (transition dipole) and A (static dipole
/// induced by the excitation). Throws ConfigError for a zero displacement.
DipoleCouplings dipole_couplings(const DipoleGeometry& geom);

}  // namespace oqb
