#include "oqb/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "oqb/error.hpp"

namespace oqb {

namespace {

constexpr double kResonanceTol = 1e-8;
constexpr double kTieTol = 1e-12;

void require_even(int n_sites) {
  if (n_sites % 2 != 0 || n_sites < 4) {
    throw ConfigError("two-exciton module requires even N >= 4, got N = " +
                      std::to_string(n_sites));
  }
}

}  // namespace

Eigen::MatrixXd h2_matrix(int n_sites, double hopping, double interaction) {
  require_even(n_sites);
  const int half = n_sites / 2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(half, half);
  h(0, 0) = interaction;
  for (int r = 0; r + 1 < half; ++r) {
    const double t = (r + 2 == half) ? 2.0 * std::sqrt(2.0) * hopping : 2.0 * hopping;
    h(r, r + 1) = t;
    h(r + 1, r) = t;
  }
  return h;
}

TwoExcitonModes two_exciton_modes(const Eigen::MatrixXd& h2, int n_sites, double hopping) {
  require_even(n_sites);
  const int half = n_sites / 2;
  if (h2.rows() != half || h2.cols() != half) throw ConfigError("h2 has the wrong size");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h2);
  if (solver.info() != Eigen::Success) throw NumericalGuardError("h2 eigensolver failed");
  Eigen::MatrixXd vecs = solver.eigenvectors();
  for (int a = 0; a < half; ++a) {
    for (int r = 0; r < half; ++r) {
      if (std::abs(vecs(r, a)) > kTieTol) {
        if (vecs(r, a) < 0.0) vecs.col(a) *= -1.0;
        break;
      }
    }
  }

  std::vector<int> order(half);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(vals[a] - vals[b]) > kTieTol) return vals[a] < vals[b];
    for (int r = 0; r < half; ++r) {
      if (std::abs(vecs(r, a) - vecs(r, b)) > kTieTol) return vecs(r, a) < vecs(r, b);
    }
    return false;
  });

  TwoExcitonModes modes;
  modes.n_sites = n_sites;
  modes.hopping = hopping;
  modes.energies.resize(half);
  modes.vectors.resize(half, half);
  modes.s_amp.resize(half);
  for (int a = 0; a < half; ++a) {
    modes.energies[a] = vals[order[a]];
    modes.vectors.col(a) = vecs.col(order[a]);
    const auto v = modes.vectors.col(a);
    modes.s_amp[a] = std::sqrt(2.0) * v[half - 1] + 2.0 * v.head(half - 1).sum();
  }
  return modes;
}

TwoExcitonModes two_exciton_modes(int n_sites, double hopping, double interaction) {
  return two_exciton_modes(h2_matrix(n_sites, hopping, interaction), n_sites, hopping);
}

double transition_prob(const TwoExcitonModes& modes, int alpha, double t, double g) {
  if (alpha < 1 || alpha > modes.energies.size()) throw ConfigError("mode index out of range");
  const double e = modes.energies[alpha - 1];
  const double j = modes.hopping;
  if (std::abs(j) < kResonanceTol) throw NumericalGuardError("perturbative resonance: J = 0");
  if (std::abs(e) < kResonanceTol) {
    throw NumericalGuardError("perturbative resonance: E_alpha = 0 for alpha = " +
                              std::to_string(alpha));
  }
  if (std::abs(e - 2.0 * j) < kResonanceTol) {
    throw NumericalGuardError("perturbative resonance: E_alpha = 2J for alpha = " +
                              std::to_string(alpha));
  }
  const double n = modes.n_sites;
  const double d = e - 2.0 * j;
  const double s2 = modes.s_amp[alpha - 1] * modes.s_amp[alpha - 1];
  const double prefactor = std::pow(g, 4) * n * n * (n - 1.0) * s2 / (4.0 * j * j * e * e * d * d);
  const double bracket = d * d + 4.0 * j * j + e * e + 4.0 * j * d * std::cos(e * t) -
                         2.0 * e * d * std::cos(2.0 * j * t) - 4.0 * j * e * std::cos(d * t);
  const double p = prefactor * bracket;
  // the bracket is a squared modulus; clamp cancellation noise
  return p < 0.0 && p > -1e-12 ? 0.0 : p;
}

double two_exciton_energy(const TwoExcitonModes& modes, double t, double g, double omega) {
  double sum = 0.0;
  for (int a = 1; a <= modes.energies.size(); ++a) {
    sum += transition_prob(modes, a, t, g) * (2.0 * omega + modes.energies[a - 1]);
  }
  return sum;
}

void write_perturbation_csv(std::ostream& out, int n_sites, double hopping,
                            std::span<const double> interactions) {
  require_even(n_sites);
  const auto old_precision = out.precision(17);
  out << "A_over_omega,alpha,energy,abs_S_sq\n";
  for (double a_int : interactions) {
    const auto modes = two_exciton_modes(n_sites, hopping, a_int);
    for (int a = 0; a < modes.energies.size(); ++a) {
      out << a_int << ',' << a + 1 << ',' << modes.energies[a] << ','
          << modes.s_amp[a] * modes.s_amp[a] << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace oqb
