#include "oqb/matrix_elements.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "oqb/error.hpp"

namespace oqb {

namespace {

constexpr double kCollisionTol = 1e-12;
constexpr double kOverflowGuard = 1e280;

cplx phase(double k) { return {std::cos(k), std::sin(k)}; }

std::vector<double> grid_angles(const FermionConfig& cfg, int grid_particles) {
  std::vector<double> out;
  for (int eta : cfg.orbitals()) {
    out.push_back(wave_number(cfg.n_sites(), grid_particles, eta).radians());
  }
  return out;
}

void check_magnitude(const cplx& z) {
  if (!(std::abs(z) < kOverflowGuard)) {
    throw NumericalGuardError("h-function product overflow");
  }
}

int fermion_sign(OrbitalMask mask, int orbital) {
  return std::popcount(mask & ((OrbitalMask{1} << orbital) - 1u)) % 2 == 0 ? 1 : -1;
}

}  // namespace

int delta_2pi(MomentumIndex delta) { return delta.is_zero() ? 1 : 0; }

MomentumIndex momentum_diff(const FermionConfig& a, const FermionConfig& b) {
  return total_momentum(a) - total_momentum(b);
}

cplx h_func(const FermionConfig& eta, const FermionConfig& chi) {
  const int m = chi.count();
  if (eta.count() != m + 1) throw ConfigError("h_func requires |eta| = |chi| + 1");
  const auto k_eta = grid_angles(eta, m + 1);
  const auto k_chi = grid_angles(chi, m);

  cplx num{1.0, 0.0};
  for (int i = 1; i < m; ++i) {
    for (int ip = 0; ip < i; ++ip) num *= phase(-k_chi[i]) - phase(-k_chi[ip]);
  }
  for (int j = 1; j <= m; ++j) {
    for (int jp = 0; jp < j; ++jp) num *= phase(k_eta[j]) - phase(k_eta[jp]);
  }
  check_magnitude(num);

  cplx den{1.0, 0.0};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= m; ++j) {
      const cplx factor = 1.0 - phase(-(k_eta[j] - k_chi[i]));
      if (std::abs(factor) < kCollisionTol) {
        throw NumericalGuardError("grid collision in h-function denominator");
      }
      den *= factor;
    }
  }
  return num / den;
}

cplx hbar_func(const FermionConfig& chi, const FermionConfig& chi2) {
  if (chi.count() != chi2.count()) throw ConfigError("hbar_func requires equal particle numbers");
  cplx sum{0.0, 0.0};
  for (const auto& eta : sector_configs(chi.n_sites(), chi.count() + 1)) {
    sum += h_func(eta, chi) * std::conj(h_func(eta, chi2));
  }
  return sum;
}

cplx f_elem(const FermionConfig& eta, const FermionConfig& chi) {
  const int m = chi.count();
  if (eta.count() != m + 1) throw ConfigError("f_elem requires |eta| = |chi| + 1");
  if (!delta_2pi(momentum_diff(eta, chi))) return {0.0, 0.0};
  const double n = eta.n_sites();
  return std::ldexp(std::pow(n, 0.5 - m), m) * h_func(eta, chi);
}

MatElemCache::MatElemCache(int n_sites) : n_sites_(n_sites), tables_(n_sites + 1) {}

const MatElemCache::Table& MatElemCache::table(int n) {
  {
    std::shared_lock lock(mutex_);
    if (tables_[n]) return *tables_[n];
  }
  std::unique_lock lock(mutex_);
  if (tables_[n]) return *tables_[n];

  auto t = std::make_unique<Table>();
  t->configs = sector_configs(n_sites_, n);
  for (std::size_t i = 0; i < t->configs.size(); ++i) t->index.emplace(t->configs[i].mask(), i);
  const auto upper = sector_configs(n_sites_, n + 1);
  Eigen::MatrixXcd h(upper.size(), t->configs.size());
  for (std::size_t r = 0; r < upper.size(); ++r) {
    for (std::size_t c = 0; c < t->configs.size(); ++c) h(r, c) = h_func(upper[r], t->configs[c]);
  }
  // same summation order as hbar_func, so entries agree bit for bit
  const auto dim = static_cast<Eigen::Index>(t->configs.size());
  t->hbar.resize(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      cplx sum{0.0, 0.0};
      for (Eigen::Index r = 0; r < h.rows(); ++r) sum += h(r, a) * std::conj(h(r, b));
      t->hbar(a, b) = sum;
    }
  }
  tables_[n] = std::move(t);
  return *tables_[n];
}

cplx MatElemCache::hbar(const FermionConfig& chi, const FermionConfig& chi2) {
  if (chi.count() != chi2.count()) throw ConfigError("hbar requires equal particle numbers");
  const auto& t = table(chi.count());
  return t.hbar(t.index.at(chi.mask()), t.index.at(chi2.mask()));
}

cplx gbar_elem(const FermionConfig& a, const FermionConfig& b, MatElemCache& cache) {
  const int m = a.count();
  if (b.count() != m) throw ConfigError("gbar_elem requires equal particle numbers");
  const double n = a.n_sites();
  cplx value = (a == b) ? cplx{m - 0.75 * n, 0.0} : cplx{0.0, 0.0};
  if (!delta_2pi(momentum_diff(a, b))) return value;

  cplx sum{0.0, 0.0};
  for (const auto& chi : sector_configs(a.n_sites(), m)) {
    sum += phase(momentum_diff(a, chi).radians()) * cache.hbar(a, chi) * cache.hbar(chi, b);
  }
  return value + std::pow(2.0 / n, 4 * m) / n * sum;
}

cplx gbar_elem(const FermionConfig& a, const FermionConfig& b) {
  MatElemCache cache(a.n_sites());
  return gbar_elem(a, b, cache);
}

Eigen::MatrixXcd lowering_matrix(std::span<const FermionConfig> rows,
                                 std::span<const FermionConfig> cols) {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) f(r, c) = f_elem(cols[c], rows[r]);
  }
  return f;
}

Eigen::MatrixXcd szsz_matrix(std::span<const FermionConfig> configs) {
  const auto dim = static_cast<Eigen::Index>(configs.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  if (configs.empty()) return out;

  const int n_sites = configs.front().n_sites();
  const int m = configs.front().count();
  const double quarter_n = 0.25 * n_sites;
  if (n_sites == 1) {
    // (S^z)^2 = 1/4 on a single site.
    out.diagonal().setConstant(0.25);
    return out;
  }

  std::unordered_map<OrbitalMask, Eigen::Index> index;
  for (Eigen::Index i = 0; i < dim; ++i) index.emplace(configs[i].mask(), i);

  std::vector<double> k(n_sites);
  for (int o = 0; o < n_sites; ++o) k[o] = wave_number(n_sites, m, o + 1).radians();

  // sum_j n_j n_{j+1}
  //   = (1/N) sum_{K1+K2 = K3+K4} e^{i(K3-K2)} c+_{K1} c+_{K2} c_{K3} c_{K4}
  const double inv_n = 1.0 / n_sites;
  for (Eigen::Index col = 0; col < dim; ++col) {
    const OrbitalMask b = configs[col].mask();
    if (m >= 2) {
      for (int o4 = 0; o4 < n_sites; ++o4) {
        if (!((b >> o4) & 1u)) continue;
        const int s4 = fermion_sign(b, o4);
        const OrbitalMask b4 = b ^ (OrbitalMask{1} << o4);
        for (int o3 = 0; o3 < n_sites; ++o3) {
          if (!((b4 >> o3) & 1u)) continue;
          const int s3 = s4 * fermion_sign(b4, o3);
          const OrbitalMask b3 = b4 ^ (OrbitalMask{1} << o3);
          for (int o2 = 0; o2 < n_sites; ++o2) {
            if ((b3 >> o2) & 1u) continue;
            const int o1 = (((o3 + o4 - o2) % n_sites) + n_sites) % n_sites;
            if (o1 == o2 || ((b3 >> o1) & 1u)) continue;
            const int s2 = s3 * fermion_sign(b3, o2);
            const OrbitalMask b2 = b3 | (OrbitalMask{1} << o2);
            const int s1 = s2 * fermion_sign(b2, o1);
            const OrbitalMask target = b2 | (OrbitalMask{1} << o1);
            auto it = index.find(target);
            if (it == index.end()) continue;
            out(it->second, col) += (s1 * inv_n) * phase(k[o3] - k[o2]);
          }
        }
      }
    }
    // S^z S^z = n n - n + N/4 summed over bonds
    out(col, col) += quarter_n - m;
  }
  return out;
}

Eigen::MatrixXcd szsz_matrix_reference(std::span<const FermionConfig> configs,
                                       MatElemCache& cache) {
  const auto dim = static_cast<Eigen::Index>(configs.size());
  Eigen::MatrixXcd out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      out(i, j) = gbar_elem(configs[i], configs[j], cache);
      if (i != j) out(j, i) = std::conj(out(i, j));
    }
  }
  return out;
}

}  // namespace oqb
