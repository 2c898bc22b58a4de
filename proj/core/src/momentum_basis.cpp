#include "oqb/momentum_basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "oqb/error.hpp"

namespace oqb {

namespace {

// Advance a strictly increasing tuple over {1..n} to its lexicographic
// successor. Returns false after the last tuple.
bool next_combination(std::vector<int>& tuple, int n) {
  const int m = static_cast<int>(tuple.size());
  for (int i = m - 1; i >= 0; --i) {
    if (tuple[i] < n - (m - 1 - i)) {
      ++tuple[i];
      for (int j = i + 1; j < m; ++j) tuple[j] = tuple[j - 1] + 1;
      return true;
    }
  }
  return false;
}

OrbitalMask mask_of(const std::vector<int>& tuple) {
  OrbitalMask mask = 0;
  for (int eta : tuple) mask |= OrbitalMask{1} << (eta - 1);
  return mask;
}

}  // namespace

MomentumIndex::MomentumIndex(long raw, int n_sites) : n_sites_(n_sites) {
  const long period = 2L * n_sites;
  long v = ((raw % period) + period) % period;
  if (v > n_sites) v -= period;
  value_ = static_cast<int>(v);
}

double MomentumIndex::radians() const {
  return value_ * std::numbers::pi / n_sites_;
}

FermionConfig::FermionConfig(int n_sites, OrbitalMask mask) : n_sites_(n_sites), mask_(mask) {
  if (n_sites < 1 || n_sites > 30) throw ConfigError("FermionConfig: unsupported chain length");
  if (n_sites < 32 && (mask >> n_sites) != 0) {
    throw ConfigError("FermionConfig: orbital outside 1..N");
  }
}

FermionConfig FermionConfig::from_orbitals(int n_sites, std::span<const int> orbitals) {
  OrbitalMask mask = 0;
  int prev = 0;
  for (int eta : orbitals) {
    if (eta <= prev || eta > n_sites) {
      throw ConfigError("orbital tuple must be strictly increasing within 1..N");
    }
    mask |= OrbitalMask{1} << (eta - 1);
    prev = eta;
  }
  return {n_sites, mask};
}

int FermionConfig::count() const { return std::popcount(mask_); }

std::vector<int> FermionConfig::orbitals() const {
  std::vector<int> out;
  out.reserve(count());
  for (int eta = 1; eta <= n_sites_; ++eta) {
    if (occupied(eta)) out.push_back(eta);
  }
  return out;
}

MomentumIndex wave_number(int n_sites, int n_particles, int eta) {
  if (eta < 1 || eta > n_sites) {
    throw ConfigError("orbital index " + std::to_string(eta) + " out of range 1.." +
                      std::to_string(n_sites));
  }
  const int sigma = n_particles % 2 == 0 ? 1 : -1;
  const long k = n_sites % 2 == 0 ? -n_sites + 2L * eta + (sigma - 3) / 2
                                  : -n_sites + 2L * eta - (sigma + 3) / 2;
  return {k, n_sites};
}

double cosine_sum(const FermionConfig& cfg) {
  const int n = cfg.count();
  double sum = 0.0;
  for (int eta : cfg.orbitals()) sum += std::cos(wave_number(cfg.n_sites(), n, eta).radians());
  return sum;
}

double free_energy(const AggregateParams& params, const FermionConfig& cfg) {
  return cfg.count() * params.omega + 2.0 * params.hopping * cosine_sum(cfg);
}

MomentumIndex total_momentum(const FermionConfig& cfg) {
  const int n = cfg.count();
  long k = 0;
  for (int eta : cfg.orbitals()) k += wave_number(cfg.n_sites(), n, eta).value();
  return {k, cfg.n_sites()};
}

std::vector<FermionConfig> sector_configs(int n_sites, int m, std::optional<int> momentum) {
  std::vector<FermionConfig> out;
  if (m < 0 || m > n_sites) return out;
  std::vector<int> tuple(m);
  for (int i = 0; i < m; ++i) tuple[i] = i + 1;
  do {
    FermionConfig cfg(n_sites, mask_of(tuple));
    if (!momentum || total_momentum(cfg).value() == MomentumIndex(*momentum, n_sites).value()) {
      out.push_back(cfg);
    }
  } while (next_combination(tuple, n_sites));
  return out;
}

std::vector<int> sector_momenta(int n_sites, int m) {
  std::set<int> seen;
  for (const auto& cfg : sector_configs(n_sites, m)) seen.insert(total_momentum(cfg).value());
  return {seen.begin(), seen.end()};
}

SubspaceBasis::SubspaceBasis(int n_sites, int total_excitations, bool zero_momentum)
    : n_sites_(n_sites), total_(total_excitations), zero_momentum_(zero_momentum) {
  if (total_excitations < 0) throw ConfigError("total excitation number must be >= 0");
  const int m_max = std::min(n_sites, total_excitations);
  block_offset_.push_back(0);
  for (int m = 0; m <= m_max; ++m) {
    auto configs = zero_momentum ? sector_configs(n_sites, m, 0) : sector_configs(n_sites, m);
    for (const auto& cfg : configs) entries_.push_back({total_excitations - m, cfg});
    block_offset_.push_back(entries_.size());
  }
}

std::span<const BasisEntry> SubspaceBasis::block(int m) const {
  return std::span<const BasisEntry>(entries_).subspan(block_offset(m), block_size(m));
}

std::vector<FermionConfig> SubspaceBasis::block_configs(int m) const {
  std::vector<FermionConfig> out;
  for (const auto& e : block(m)) out.push_back(e.config);
  return out;
}

std::optional<std::size_t> SubspaceBasis::find(const FermionConfig& cfg) const {
  const int m = cfg.count();
  if (m > max_excitons()) return std::nullopt;
  auto blk = block(m);
  // tuple-lexicographic order: compare sorted orbital lists
  auto it = std::lower_bound(blk.begin(), blk.end(), cfg, [](const BasisEntry& e, const FermionConfig& c) {
    return e.config.orbitals() < c.orbitals();
  });
  if (it != blk.end() && it->config == cfg) return block_offset(m) + (it - blk.begin());
  return std::nullopt;
}

SubspaceBasis build_subspace(int n_sites, int total_excitations, bool zero_momentum) {
  return {n_sites, total_excitations, zero_momentum};
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

}  // namespace oqb
