#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "oqb/momentum_basis.hpp"
#include "oqb/params.hpp"

namespace oqb {

struct BlockRange {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

/// Dense Hermitian matrix over a basis. When `blocks` is non-empty the
/// operator is block diagonal over those ranges and products exploit it.
struct HermitianOperator {
  Eigen::MatrixXcd matrix;
  std::vector<BlockRange> blocks;

  Eigen::Index dim() const { return matrix.rows(); }
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& states) const;
  double expectation(const Eigen::VectorXcd& state) const;
};

/// Copy the upper triangle onto the lower one so the matrix is exactly
/// Hermitian; the diagonal is made real.
void mirror_upper(Eigen::MatrixXcd& m);

/// Parameter-independent ingredients of H_m restricted to m excitons and,
/// optionally, one total-momentum value.
struct MolecularSector {
  int n_sites = 0;
  int excitons = 0;
  std::optional<int> momentum;
  std::vector<FermionConfig> configs;
  Eigen::VectorXd cosines;  // sum_l cos K_l per config
  Eigen::MatrixXcd szsz;    // sum_j S^z_j S^z_{j+1}

  std::size_t dim() const { return configs.size(); }
};

MolecularSector make_molecular_sector(int n_sites, int m, std::optional<int> momentum);
MolecularSector make_molecular_sector(int n_sites, std::vector<FermionConfig> configs);

/// H_m on a sector: m*omega + 2J sum cos K + A (G + m - N/4). The constant
/// folds the XXZ offsets so that the vacuum has exactly zero energy.
Eigen::MatrixXcd molecular_matrix(const AggregateParams& params, const MolecularSector& sector);

HermitianOperator molecular_block(const AggregateParams& params, int m,
                                  std::optional<int> momentum = std::nullopt);

/// Lowest levels of H_m across every (m, momentum) sector.
struct SpectrumResult {
  std::vector<double> levels;      // ascending
  std::vector<int> n_ex;           // |m - m_ground|: excitations upon the ground state
  std::vector<int> excitons;       // sector m of each level
  std::vector<int> momenta;        // total momentum (units of pi/N) of each level
  std::vector<int> multiplicity;   // how many levels in the full spectrum coincide (1e-9)
  double ground_energy = 0.0;
  int ground_excitons = 0;         // sector m of the ground state (lowest m on ties)
};

SpectrumResult molecular_spectrum(const AggregateParams& params, std::size_t n_levels);

/// Tracks the lowest H_m level of every non-vacuum (m, momentum) sector
/// while A varies at fixed omega and J. H_m = H_0 + A W with W = sum_j
/// n_j n_{j+1} >= 0, so each sector's lowest level is nondecreasing in A
/// and Lipschitz with constant ||W|| (m - 1 bonds for m < N, N for m = N).
/// Earlier evaluations therefore bound later ones and most sectors are
/// never diagonalized twice.
class LowestLevelScanner {
 public:
  explicit LowestLevelScanner(int n_sites);

  /// min over non-vacuum sectors of the lowest H_m eigenvalue. Exact when
  /// the result is <= margin; otherwise a lower bound that exceeds margin.
  double lowest_nonvacuum(const AggregateParams& params, double margin);

  /// Whether some non-vacuum level lies strictly below `threshold`.
  /// Smallest sectors are tried first and the scan stops at the first hit.
  bool has_level_below(const AggregateParams& params, double threshold);

  std::size_t sectors_evaluated() const { return evaluated_; }

 private:
  struct Entry {
    int m;
    int momentum;
    std::size_t dim;
    double lipschitz;
    std::vector<std::pair<double, double>> history;  // (A, lowest level)
  };
  void sync(const AggregateParams& params);
  double evaluate(Entry& e, const AggregateParams& params);
  static double lower_bound(const Entry& e, double a);
  static double upper_bound(const Entry& e, double a);

  int n_sites_;
  double last_omega_ = 0.0;
  double last_hopping_ = 0.0;
  std::vector<Entry> entries_;  // ascending dimension
  std::size_t evaluated_ = 0;
};

/// A/omega at which the ground state of H_m stops being the vacuum, i.e.
/// where the lowest non-vacuum level changes sign, located by bisection of
/// [lo, hi] to width `tol`. Throws ConfigError unless the sign changes
/// across the bracket.
double locate_ground_crossing(const AggregateParams& params, double lo, double hi, double tol);

/// Parameter-independent tables for one excitation-number subspace: the
/// basis, the molecular sectors per exciton number, and the lowering (F)
/// blocks between neighbouring exciton numbers.
class SubspaceTables {
 public:
  SubspaceTables(int n_sites, int total_excitations, bool zero_momentum);

  const SubspaceBasis& basis() const { return basis_; }
  const MolecularSector& sector(int m) const { return sectors_[m]; }
  /// rows: m-exciton block, cols: (m+1)-exciton block
  const Eigen::MatrixXcd& lowering(int m) const { return lowering_[m]; }

 private:
  SubspaceBasis basis_;
  std::vector<MolecularSector> sectors_;
  std::vector<Eigen::MatrixXcd> lowering_;
};

struct FdOperators {
  HermitianOperator hamiltonian;  // full Frenkel-Dicke operator
  HermitianOperator molecular;    // H_m as an observable on the same basis
};

/// Block-tridiagonal Frenkel-Dicke matrix: diagonal blocks H_m(m) +
/// omega_c (Ntot - m), off-diagonal blocks g sqrt(Ntot - m) F.
FdOperators assemble_fd(const SubspaceTables& tables, const AggregateParams& params,
                        const CavityParams& cavity, double g);

HermitianOperator assemble_fd(const AggregateParams& params, const CavityParams& cavity, double g,
                              int total_excitations, bool zero_momentum);

}  // namespace oqb
