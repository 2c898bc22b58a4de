#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oqb {

// Second-order charging of the zero-momentum two-exciton states from the
// vacuum through the k = 0 one-exciton state. Assumes a resonant cavity
// (omega_c = omega), so the intermediate state sits 2J above the initial
// one. Energies are in units of omega. Even N only.

/// Tridiagonal representation of H_m - 2 omega in the ordered two-exciton
/// Bloch basis |xi_r>, r = 1..N/2 (pair separation r). Throws ConfigError
/// for odd N or N < 4.
Eigen::MatrixXd h2_matrix(int n_sites, double hopping, double interaction);

struct TwoExcitonModes {
  int n_sites = 0;
  double hopping = 0.0;
  Eigen::VectorXd energies;  // E_alpha, ascending
  Eigen::MatrixXd vectors;   // column alpha - 1 is V^(alpha) over r = 1..N/2
  Eigen::VectorXd s_amp;     // <phi_alpha| sum_j S^+_j |xi>
};

/// Spectral decomposition of h2 plus the one-to-two exciton amplitudes.
/// Degenerate energies are ordered by their eigenvectors' Bloch components;
/// each eigenvector's first nonzero component is made positive.
TwoExcitonModes two_exciton_modes(const Eigen::MatrixXd& h2, int n_sites, double hopping);
TwoExcitonModes two_exciton_modes(int n_sites, double hopping, double interaction);

/// Probability of vac -> phi_alpha at time t (alpha is 1-based, t in 1/omega).
/// Throws NumericalGuardError near E_alpha = 0, E_alpha = 2J or J = 0.
double transition_prob(const TwoExcitonModes& modes, int alpha, double t, double g);

/// sum_alpha P_alpha(t) (2 omega + E_alpha).
double two_exciton_energy(const TwoExcitonModes& modes, double t, double g, double omega = 1.0);

/// Rows "A_over_omega,alpha,energy,abs_S_sq" for each interaction value.
void write_perturbation_csv(std::ostream& out, int n_sites, double hopping,
                            std::span<const double> interactions);

}  // namespace oqb
