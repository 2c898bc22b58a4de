#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "oqb/dynamics.hpp"
#include "oqb/momentum_basis.hpp"
#include "oqb/params.hpp"

namespace oqb::oracle {

// Brute-force ground truth in the full (2^N spin masks) x (photon ladder)
// product space. Built from site-local operators on bit masks only; it never
// touches the closed-form matrix elements, and it diagonalizes with Eigen's
// own solver rather than LAPACK.

/// Row index = photons * 2^N + spin mask (bit j-1 set = site j excited).
struct FullSpaceOperator {
  int n_sites = 0;
  int photon_cutoff = 0;
  Eigen::MatrixXcd matrix;

  Eigen::Index index(std::uint32_t mask, int photons) const {
    return static_cast<Eigen::Index>(photons) * (Eigen::Index{1} << n_sites) + mask;
  }
  Eigen::Index dim() const { return matrix.rows(); }
};

/// H_m on 2^N site configurations (vacuum energy 0).
Eigen::MatrixXcd molecular_hamiltonian(const AggregateParams& params);

/// sum_j S^z_j S^z_{j+1} on 2^N site configurations.
Eigen::MatrixXcd szsz_operator(int n_sites);

/// sum_j S^-_j on 2^N site configurations.
Eigen::MatrixXcd lowering_operator(int n_sites);

/// H_m + omega_c c^+c + g sum_j (S^+_j c + S^-_j c^+), photons 0..cutoff.
/// Refuses N > 10 or dimensions above 2^22.
FullSpaceOperator brute_force_H(const AggregateParams& params, const CavityParams& cavity,
                                double g, int photon_cutoff);

/// H_m (x) 1_photon on the same space as `full`.
FullSpaceOperator molecular_observable(const AggregateParams& params, int photon_cutoff);

/// Commutator norm || [H, N_exc] ||_F.
double excitation_commutator_norm(const FullSpaceOperator& op);

/// Plane-wave Slater state N^{-n/2} det[exp(i K_a j_b)] over site masks.
Eigen::VectorXcd slater_state(const FermionConfig& cfg);

/// Columns embed each basis entry |photons> (x) |eta> into the full space.
Eigen::MatrixXcd embedding(const FullSpaceOperator& full, const SubspaceBasis& basis);

/// <b_i| H |b_j> for the basis entries.
Eigen::MatrixXcd project_subspace(const FullSpaceOperator& full, const SubspaceBasis& basis);

/// Indices of full-space rows with photons + excitons == total.
std::vector<Eigen::Index> excitation_sector(const FullSpaceOperator& full, int total);

/// |n_photons> (x) |vac> in the full space.
Eigen::VectorXcd product_state(const FullSpaceOperator& full, int n_photons);

/// Exact propagation restricted to the excitation sector containing psi0,
/// with e_density = <H_m>/(N omega) evaluated densely.
Trajectory brute_force_evolve(const FullSpaceOperator& full, const FullSpaceOperator& molecular,
                              const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                              const AggregateParams& params);

}  // namespace oqb::oracle
