#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "oqb/params.hpp"

namespace oqb {

/// Crystal momentum K = k * pi / N stored as the integer k, reduced mod 2N
/// into (-N, N]. Equality is exact congruence mod 2 pi.
class MomentumIndex {
 public:
  MomentumIndex(long raw, int n_sites);

  int value() const { return value_; }
  int n_sites() const { return n_sites_; }
  double radians() const;
  bool is_zero() const { return value_ == 0; }

  friend MomentumIndex operator+(MomentumIndex a, MomentumIndex b) {
    return {static_cast<long>(a.value_) + b.value_, a.n_sites_};
  }
  friend MomentumIndex operator-(MomentumIndex a, MomentumIndex b) {
    return {static_cast<long>(a.value_) - b.value_, a.n_sites_};
  }
  friend bool operator==(MomentumIndex, MomentumIndex) = default;

 private:
  int value_;
  int n_sites_;
};

using OrbitalMask = std::uint32_t;

/// Occupied free-fermion orbitals eta_1 < ... < eta_n (1-based), stored as a
/// bit mask with bit (eta - 1) set. The orbital grid depends on the parity
/// of n: sigma = +1 (antiperiodic fermions) for even n, -1 for odd n.
class FermionConfig {
 public:
  FermionConfig(int n_sites, OrbitalMask mask);

  static FermionConfig vacuum(int n_sites) { return {n_sites, 0u}; }
  static FermionConfig from_orbitals(int n_sites, std::span<const int> orbitals);

  int n_sites() const { return n_sites_; }
  OrbitalMask mask() const { return mask_; }
  int count() const;
  int parity() const { return count() % 2 == 0 ? 1 : -1; }
  bool occupied(int eta) const { return (mask_ >> (eta - 1)) & 1u; }
  std::vector<int> orbitals() const;

  friend bool operator==(const FermionConfig&, const FermionConfig&) = default;

 private:
  int n_sites_;
  OrbitalMask mask_;
};

/// Wave number of orbital eta in the grid used by n-particle states.
MomentumIndex wave_number(int n_sites, int n_particles, int eta);

/// Eigenenergy of the A = 0 chain: n*omega + 2J sum_l cos K_l. The vacuum
/// sits at exactly zero.
double free_energy(const AggregateParams& params, const FermionConfig& cfg);

/// sum_l cos K_l, the parameter-independent part of free_energy.
double cosine_sum(const FermionConfig& cfg);

MomentumIndex total_momentum(const FermionConfig& cfg);

/// All m-particle configurations in tuple-lexicographic order, optionally
/// restricted to a total momentum (canonical integer value).
std::vector<FermionConfig> sector_configs(int n_sites, int m,
                                          std::optional<int> momentum = std::nullopt);

/// Distinct total-momentum values carried by m-particle states.
std::vector<int> sector_momenta(int n_sites, int m);

struct BasisEntry {
  int photons;
  FermionConfig config;
};

/// Basis of the sector with fixed total excitation number: entries
/// |Ntot - m> (x) |eta_m>, ordered by ascending m then tuple order. With
/// zero_momentum set only configurations with total momentum 0 mod 2 pi
/// are kept.
class SubspaceBasis {
 public:
  SubspaceBasis(int n_sites, int total_excitations, bool zero_momentum);

  int n_sites() const { return n_sites_; }
  int total_excitations() const { return total_; }
  bool zero_momentum() const { return zero_momentum_; }
  int max_excitons() const { return static_cast<int>(block_offset_.size()) - 2; }

  std::size_t dim() const { return entries_.size(); }
  const std::vector<BasisEntry>& entries() const { return entries_; }
  const BasisEntry& operator[](std::size_t i) const { return entries_[i]; }

  /// [offset, offset + size) of the m-exciton block.
  std::size_t block_offset(int m) const { return block_offset_[m]; }
  std::size_t block_size(int m) const { return block_offset_[m + 1] - block_offset_[m]; }
  std::span<const BasisEntry> block(int m) const;
  std::vector<FermionConfig> block_configs(int m) const;

  std::optional<std::size_t> find(const FermionConfig& cfg) const;

 private:
  int n_sites_;
  int total_;
  bool zero_momentum_;
  std::vector<BasisEntry> entries_;
  std::vector<std::size_t> block_offset_;
};

SubspaceBasis build_subspace(int n_sites, int total_excitations, bool zero_momentum);

std::size_t binomial(int n, int k);

}  // namespace oqb
