#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "oqb/momentum_basis.hpp"

namespace oqb {

using cplx = std::complex<double>;

// Closed-form spin-operator matrix elements between free-fermion eigenstates
// of the XX ring. States use the plane-wave Slater convention
//   <j_1 < ... < j_n | eta> = N^{-n/2} det[exp(i K_{eta_a} j_b)],
// which is the convention the product formulas below reproduce exactly.

/// 1 iff the momentum difference is a multiple of 2 pi.
int delta_2pi(MomentumIndex delta);

/// sum K(a) - sum K(b), each configuration on its own parity grid.
MomentumIndex momentum_diff(const FermionConfig& a, const FermionConfig& b);

/// Product formula linking an (m+1)-particle state to an m-particle state.
/// Throws NumericalGuardError on a vanishing denominator factor, which the
/// interleaved parity grids make unreachable.
cplx h_func(const FermionConfig& eta, const FermionConfig& chi);

/// sum over (n+1)-tuples of h(eta, chi) * conj(h(eta, chi2)).
cplx hbar_func(const FermionConfig& chi, const FermionConfig& chi2);

/// <chi| sum_j S^-_j |eta>, with |eta| = |chi| + 1.
cplx f_elem(const FermionConfig& eta, const FermionConfig& chi);

/// Memoized hbar tables, one dense matrix per particle number, built on
/// first use. Safe for concurrent readers; population takes a unique lock.
class MatElemCache {
 public:
  explicit MatElemCache(int n_sites);

  int n_sites() const { return n_sites_; }
  cplx hbar(const FermionConfig& chi, const FermionConfig& chi2);

 private:
  struct Table {
    std::vector<FermionConfig> configs;
    std::unordered_map<OrbitalMask, std::size_t> index;
    Eigen::MatrixXcd hbar;
  };
  const Table& table(int n);

  int n_sites_;
  std::shared_mutex mutex_;
  std::vector<std::unique_ptr<Table>> tables_;
};

/// <a| sum_j S^z_j S^z_{j+1} |b> from the explicit chi-sum formula. Cost is
/// O(C(N,m)) hbar lookups per element; meant for validation and small N.
cplx gbar_elem(const FermionConfig& a, const FermionConfig& b, MatElemCache& cache);
cplx gbar_elem(const FermionConfig& a, const FermionConfig& b);

/// F block: rows are m-particle configs, columns (m+1)-particle configs.
Eigen::MatrixXcd lowering_matrix(std::span<const FermionConfig> rows,
                                 std::span<const FermionConfig> cols);

/// sum_j S^z_j S^z_{j+1} over a list of equal-m configs, evaluated by
/// applying the two-body density-density operator in the momentum basis.
/// The list must be closed under the operator (a full momentum sector).
Eigen::MatrixXcd szsz_matrix(std::span<const FermionConfig> configs);

/// Same block through gbar_elem; used to cross-check szsz_matrix.
Eigen::MatrixXcd szsz_matrix_reference(std::span<const FermionConfig> configs,
                                       MatElemCache& cache);

}  // namespace oqb
