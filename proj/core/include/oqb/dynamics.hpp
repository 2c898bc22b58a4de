#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "oqb/hamiltonian.hpp"
#include "oqb/linalg.hpp"
#include "oqb/momentum_basis.hpp"
#include "oqb/params.hpp"

namespace oqb {

/// Uniform grid of omega*t values on [0, t_max].
struct TimeGrid {
  double step = 0.01;
  double t_max = 100.0;

  std::size_t size() const;
  double at(std::size_t i) const { return static_cast<double>(i) * step; }
};

/// e_density = E_m(t) / (N omega), p_density = P(t) / (N omega^2), sampled
/// on omega*t. p_density[0] is defined as 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> e_density;
  std::vector<double> p_density;
};

struct ChargingSummary {
  double e_max_density = 0.0;
  double t_at_e_max = 0.0;
  double p_max_density = 0.0;
  double t_at_p_max = 0.0;
  bool e_max_at_boundary = false;
  bool p_max_at_boundary = false;
  double window_start = 0.0;
  double window_end = 100.0;
};

/// |n_ph> (x) |vac>. Requires A/omega > -1, where the vacuum is the ground
/// state of the aggregate.
Eigen::VectorXcd initial_vector(const SubspaceBasis& basis, int n_photons,
                                const AggregateParams& params);

/// Spectral propagator for the charging protocol. The Hamiltonian is
/// diagonalized once; states at any time follow from
/// psi(t) = U exp(-i D t) U^+ psi0.
class ChargingDynamics {
 public:
  ChargingDynamics(const HermitianOperator& hamiltonian, HermitianOperator molecular,
                   const Eigen::VectorXcd& psi0, const AggregateParams& params);

  Eigen::VectorXcd state(double omega_t) const;
  double e_density(double omega_t) const;
  double p_density(double omega_t) const;
  /// <psi(t)| P_block H_m P_block |psi(t)> / (N omega) for one diagonal block.
  double block_e_density(double omega_t, BlockRange block) const;

  /// Evaluates the grid; trips the blow-up guard (NumericalGuardError) if the
  /// density exceeds energy_bound_density() by more than 1e-6.
  Trajectory trajectory(const TimeGrid& grid) const;

  /// Rigorous upper bound on E_m/(N omega): <H> minus a Gershgorin lower
  /// bound of H - H_m, which is conserved-energy bookkeeping for the
  /// cavity and coupling terms.
  double energy_bound_density() const { return bound_density_; }
  double total_energy() const;
  const EigenDecomposition& spectrum() const { return eig_; }

 private:
  Eigen::VectorXcd phases(double omega_t) const;

  HermitianOperator molecular_;
  EigenDecomposition eig_;
  Eigen::VectorXcd coeffs_;  // U^+ psi0
  double omega_;
  double scale_;             // N omega
  double bound_density_;
};

Trajectory evolve_observables(const HermitianOperator& hamiltonian,
                              const HermitianOperator& molecular, const Eigen::VectorXcd& psi0,
                              const TimeGrid& grid, const AggregateParams& params);

/// Maxima of e_density and p_density over the trajectory window, refined
/// by golden-section search on the exact curve around the best grid point.
ChargingSummary find_maxima(const ChargingDynamics& dynamics, const Trajectory& traj);

/// Same, for an arbitrary e_density(omega_t) curve; p is taken as e / t.
ChargingSummary find_maxima(const std::function<double(double)>& e_density,
                            const Trajectory& traj);

}  // namespace oqb
