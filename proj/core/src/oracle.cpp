#include "oqb/oracle.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include "oqb/error.hpp"

namespace oqb::oracle {

namespace {

using Mask = std::uint32_t;
using cplx = std::complex<double>;

constexpr int kMaxSites = 10;
constexpr Eigen::Index kMaxDim = Eigen::Index{1} << 22;

bool excited(Mask s, int site) { return (s >> site) & 1u; }

int next_site(int j, int n) { return (j + 1) % n; }

}  // namespace

Eigen::MatrixXcd molecular_hamiltonian(const AggregateParams& params) {
  params.validate();
  const int n = params.n_sites;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Mask s = 0; s < static_cast<Mask>(dim); ++s) {
    double diag = params.omega * std::popcount(s);
    for (int j = 0; j < n; ++j) {
      const int jn = next_site(j, n);
      if (excited(s, j) && excited(s, jn)) diag += params.interaction;
      // J (a+_j a_{j+1} + a+_{j+1} a_j), hard-core bosons
      if (jn == j) {
        if (excited(s, j)) diag += 2.0 * params.hopping;
        continue;
      }
      if (excited(s, jn) && !excited(s, j)) {
        h(s ^ (1u << jn) ^ (1u << j), s) += params.hopping;
      }
      if (excited(s, j) && !excited(s, jn)) {
        h(s ^ (1u << jn) ^ (1u << j), s) += params.hopping;
      }
    }
    h(s, s) += diag;
  }
  return h;
}

Eigen::MatrixXcd szsz_operator(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(dim, dim);
  for (Mask s = 0; s < static_cast<Mask>(dim); ++s) {
    double v = 0.0;
    for (int j = 0; j < n_sites; ++j) {
      const double a = excited(s, j) ? 0.5 : -0.5;
      const double b = excited(s, next_site(j, n_sites)) ? 0.5 : -0.5;
      v += a * b;
    }
    z(s, s) = v;
  }
  return z;
}

Eigen::MatrixXcd lowering_operator(int n_sites) {
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  for (Mask s = 0; s < static_cast<Mask>(dim); ++s) {
    for (int j = 0; j < n_sites; ++j) {
      if (excited(s, j)) op(s ^ (1u << j), s) += 1.0;
    }
  }
  return op;
}

FullSpaceOperator brute_force_H(const AggregateParams& params, const CavityParams& cavity,
                                double g, int photon_cutoff) {
  params.validate();
  cavity.validate();
  if (params.n_sites > kMaxSites) throw ConfigError("oracle limited to N <= 10");
  if (photon_cutoff < 0) throw ConfigError("photon cutoff must be >= 0");
  const Eigen::Index spin_dim = Eigen::Index{1} << params.n_sites;
  const Eigen::Index dim = spin_dim * (photon_cutoff + 1);
  if (dim > kMaxDim) throw ConfigError("oracle dimension exceeds 2^22");

  FullSpaceOperator full;
  full.n_sites = params.n_sites;
  full.photon_cutoff = photon_cutoff;
  full.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  const Eigen::MatrixXcd hm = molecular_hamiltonian(params);
  for (int p = 0; p <= photon_cutoff; ++p) {
    full.matrix.block(p * spin_dim, p * spin_dim, spin_dim, spin_dim) = hm;
    full.matrix.block(p * spin_dim, p * spin_dim, spin_dim, spin_dim).diagonal().array() +=
        cavity.omega_c * p;
  }
  for (int p = 1; p <= photon_cutoff; ++p) {
    const double ladder = g * std::sqrt(static_cast<double>(p));
    for (Mask s = 0; s < static_cast<Mask>(spin_dim); ++s) {
      for (int j = 0; j < params.n_sites; ++j) {
        if (excited(s, j)) continue;
        // S^+_j c : |p, s> -> sqrt(p) |p-1, s + j>
        const Eigen::Index from = full.index(s, p);
        const Eigen::Index to = full.index(s | (1u << j), p - 1);
        full.matrix(to, from) += ladder;
        full.matrix(from, to) += ladder;
      }
    }
  }
  return full;
}

FullSpaceOperator molecular_observable(const AggregateParams& params, int photon_cutoff) {
  const Eigen::Index spin_dim = Eigen::Index{1} << params.n_sites;
  FullSpaceOperator out;
  out.n_sites = params.n_sites;
  out.photon_cutoff = photon_cutoff;
  out.matrix = Eigen::MatrixXcd::Zero(spin_dim * (photon_cutoff + 1), spin_dim * (photon_cutoff + 1));
  const Eigen::MatrixXcd hm = molecular_hamiltonian(params);
  for (int p = 0; p <= photon_cutoff; ++p) {
    out.matrix.block(p * spin_dim, p * spin_dim, spin_dim, spin_dim) = hm;
  }
  return out;
}

double excitation_commutator_norm(const FullSpaceOperator& op) {
  Eigen::VectorXd counts(op.dim());
  const Eigen::Index spin_dim = Eigen::Index{1} << op.n_sites;
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    counts[i] = static_cast<double>(i / spin_dim + std::popcount(static_cast<Mask>(i % spin_dim)));
  }
  Eigen::MatrixXcd comm = op.matrix * counts.asDiagonal();
  comm -= counts.asDiagonal() * op.matrix;
  return comm.norm();
}

Eigen::VectorXcd slater_state(const FermionConfig& cfg) {
  const int n_sites = cfg.n_sites();
  const int n = cfg.count();
  const auto orbitals = cfg.orbitals();
  std::vector<double> k;
  for (int eta : orbitals) k.push_back(wave_number(n_sites, n, eta).radians());

  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double norm = std::pow(static_cast<double>(n_sites), -0.5 * n);
  for (Mask s = 0; s < static_cast<Mask>(dim); ++s) {
    if (std::popcount(s) != n) continue;
    std::vector<int> sites;
    for (int j = 0; j < n_sites; ++j) {
      if (excited(s, j)) sites.push_back(j + 1);
    }
    Eigen::MatrixXcd m(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) m(a, b) = std::polar(1.0, k[a] * sites[b]);
    }
    v[s] = norm * (n == 0 ? cplx{1.0, 0.0} : m.determinant());
  }
  return v;
}

Eigen::MatrixXcd embedding(const FullSpaceOperator& full, const SubspaceBasis& basis) {
  const Eigen::Index spin_dim = Eigen::Index{1} << full.n_sites;
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(full.dim(), static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto& e = basis[i];
    if (e.photons > full.photon_cutoff) throw ConfigError("basis entry exceeds photon cutoff");
    w.col(static_cast<Eigen::Index>(i)).segment(e.photons * spin_dim, spin_dim) =
        slater_state(e.config);
  }
  return w;
}

Eigen::MatrixXcd project_subspace(const FullSpaceOperator& full, const SubspaceBasis& basis) {
  const Eigen::MatrixXcd w = embedding(full, basis);
  return w.adjoint() * full.matrix * w;
}

std::vector<Eigen::Index> excitation_sector(const FullSpaceOperator& full, int total) {
  const Eigen::Index spin_dim = Eigen::Index{1} << full.n_sites;
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < full.dim(); ++i) {
    if (i / spin_dim + std::popcount(static_cast<Mask>(i % spin_dim)) == total) rows.push_back(i);
  }
  return rows;
}

Eigen::VectorXcd product_state(const FullSpaceOperator& full, int n_photons) {
  if (n_photons > full.photon_cutoff) throw ConfigError("photon number exceeds cutoff");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(full.dim());
  psi[full.index(0u, n_photons)] = 1.0;
  return psi;
}

Trajectory brute_force_evolve(const FullSpaceOperator& full, const FullSpaceOperator& molecular,
                              const Eigen::VectorXcd& psi0, const TimeGrid& grid,
                              const AggregateParams& params) {
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ConfigError("initial state is not normalized");
  // Locate the excitation sector of psi0 (it must have a definite total).
  const Eigen::Index spin_dim = Eigen::Index{1} << full.n_sites;
  int total = -1;
  for (Eigen::Index i = 0; i < psi0.size(); ++i) {
    if (std::abs(psi0[i]) == 0.0) continue;
    const int t = static_cast<int>(i / spin_dim + std::popcount(static_cast<Mask>(i % spin_dim)));
    if (total >= 0 && t != total) throw ConfigError("initial state mixes excitation sectors");
    total = t;
  }
  const auto rows = excitation_sector(full, total);
  const auto d = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd h(d, d), hm(d, d);
  Eigen::VectorXcd c0(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    c0[a] = psi0[rows[a]];
    for (Eigen::Index b = 0; b < d; ++b) {
      h(a, b) = full.matrix(rows[a], rows[b]);
      hm(a, b) = molecular.matrix(rows[a], rows[b]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalGuardError("oracle eigensolver failed");
  const Eigen::VectorXcd coeff = solver.eigenvectors().adjoint() * c0;
  const double scale = params.n_sites * params.omega;

  Trajectory traj;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wt = grid.at(i);
    const double t = wt / params.omega;
    Eigen::VectorXcd ph(d);
    for (Eigen::Index a = 0; a < d; ++a) ph[a] = coeff[a] * std::polar(1.0, -solver.eigenvalues()[a] * t);
    const Eigen::VectorXcd psi = solver.eigenvectors() * ph;
    const double e = psi.dot(hm * psi).real() / scale;
    traj.times.push_back(wt);
    traj.e_density.push_back(e);
    traj.p_density.push_back(wt > 0.0 ? e / wt : 0.0);
  }
  return traj;
}

}  // namespace oqb::oracle
