#include "oqb/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <lapacke.h>

#include "oqb/error.hpp"
#include "oqb/linalg.hpp"
#include "oqb/matrix_elements.hpp"

namespace oqb {

Eigen::MatrixXcd HermitianOperator::apply(const Eigen::MatrixXcd& states) const {
  if (blocks.empty()) return matrix * states;
  Eigen::MatrixXcd out(states.rows(), states.cols());
  for (const auto& b : blocks) {
    out.middleRows(b.offset, b.size).noalias() =
        matrix.block(b.offset, b.offset, b.size, b.size) * states.middleRows(b.offset, b.size);
  }
  return out;
}

double HermitianOperator::expectation(const Eigen::VectorXcd& state) const {
  return state.dot(apply(state).col(0)).real();
}

void mirror_upper(Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    m(j, j) = m(j, j).real();
    for (Eigen::Index i = 0; i < j; ++i) m(j, i) = std::conj(m(i, j));
  }
}

MolecularSector make_molecular_sector(int n_sites, std::vector<FermionConfig> configs) {
  MolecularSector s;
  s.n_sites = n_sites;
  s.excitons = configs.empty() ? 0 : configs.front().count();
  s.configs = std::move(configs);
  s.cosines.resize(static_cast<Eigen::Index>(s.configs.size()));
  for (std::size_t i = 0; i < s.configs.size(); ++i) s.cosines[i] = cosine_sum(s.configs[i]);
  s.szsz = szsz_matrix(s.configs);
  return s;
}

MolecularSector make_molecular_sector(int n_sites, int m, std::optional<int> momentum) {
  auto s = make_molecular_sector(n_sites, sector_configs(n_sites, m, momentum));
  s.excitons = m;
  s.momentum = momentum;
  return s;
}

Eigen::MatrixXcd molecular_matrix(const AggregateParams& params, const MolecularSector& sector) {
  const double offset = sector.excitons - 0.25 * sector.n_sites;
  Eigen::MatrixXcd h = params.interaction * sector.szsz;
  h.diagonal().array() += sector.excitons * params.omega + params.interaction * offset;
  h.diagonal().real() += 2.0 * params.hopping * sector.cosines;
  mirror_upper(h);
  return h;
}

HermitianOperator molecular_block(const AggregateParams& params, int m,
                                  std::optional<int> momentum) {
  params.validate();
  if (m < 0 || m > params.n_sites) throw ConfigError("exciton number out of range");
  auto sector = make_molecular_sector(params.n_sites, m, momentum);
  HermitianOperator op{molecular_matrix(params, sector), {}};
  return op;
}

SpectrumResult molecular_spectrum(const AggregateParams& params, std::size_t n_levels) {
  params.validate();
  const int n = params.n_sites;
  if (n_levels > (std::size_t{1} << n)) throw ConfigError("n_levels exceeds 2^N");

  struct Level {
    double energy;
    int m;
    int momentum;
  };
  std::vector<Level> all;
  all.reserve(std::size_t{1} << n);
  for (int m = 0; m <= n; ++m) {
    for (int k : sector_momenta(n, m)) {
      const auto sector = make_molecular_sector(n, m, k);
      const Eigen::VectorXd values = eigvalsh(molecular_matrix(params, sector));
      for (double e : values) all.push_back({e, m, k});
    }
  }
  std::sort(all.begin(), all.end(), [](const Level& a, const Level& b) {
    return std::tie(a.energy, a.m, a.momentum) < std::tie(b.energy, b.m, b.momentum);
  });

  SpectrumResult out;
  if (!all.empty()) {
    out.ground_energy = all.front().energy;
    out.ground_excitons = all.front().m;
  }
  const std::size_t count = std::min(n_levels, all.size());
  for (std::size_t i = 0; i < count; ++i) {
    out.levels.push_back(all[i].energy);
    out.n_ex.push_back(std::abs(all[i].m - out.ground_excitons));
    out.excitons.push_back(all[i].m);
    out.momenta.push_back(all[i].momentum);
    const double tol = 1e-9 * std::max(1.0, std::abs(all[i].energy));
    const auto lo = std::lower_bound(all.begin(), all.end(), all[i].energy - tol,
                                     [](const Level& l, double e) { return l.energy < e; });
    const auto hi = std::upper_bound(all.begin(), all.end(), all[i].energy + tol,
                                     [](double e, const Level& l) { return e < l.energy; });
    out.multiplicity.push_back(static_cast<int>(hi - lo));
  }
  return out;
}

namespace {

double lowest_eigenvalue(Eigen::MatrixXcd h) {
  const auto n = static_cast<lapack_int>(h.rows());
  if (n == 1) return h(0, 0).real();
  Eigen::VectorXd w(n);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'N', 'I', 'U', n, reinterpret_cast<lapack_complex_double*>(h.data()), n,
      0.0, 0.0, 1, 1, 0.0, &found, w.data(), nullptr, 1, support.data());
  if (info != 0 || found != 1) throw NumericalGuardError("zheevr failed for lowest level");
  return w[0];
}

}  // namespace

LowestLevelScanner::LowestLevelScanner(int n_sites) : n_sites_(n_sites) {
  for (int m = 1; m <= n_sites; ++m) {
    const double lipschitz = m == n_sites ? n_sites : m - 1;
    for (int k : sector_momenta(n_sites, m)) {
      entries_.push_back({m, k, sector_configs(n_sites, m, k).size(), lipschitz, {}});
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.dim < b.dim; });
}

void LowestLevelScanner::sync(const AggregateParams& params) {
  if (params.n_sites != n_sites_) throw ConfigError("scanner built for a different N");
  if (params.omega != last_omega_ || params.hopping != last_hopping_) {
    for (auto& e : entries_) e.history.clear();
    last_omega_ = params.omega;
    last_hopping_ = params.hopping;
  }
}

double LowestLevelScanner::evaluate(Entry& e, const AggregateParams& params) {
  const auto sector = make_molecular_sector(n_sites_, e.m, e.momentum);
  const double value = lowest_eigenvalue(molecular_matrix(params, sector));
  e.history.emplace_back(params.interaction, value);
  ++evaluated_;
  return value;
}

double LowestLevelScanner::lower_bound(const Entry& e, double a) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [a_i, e_i] : e.history) {
    best = std::max(best, a >= a_i ? e_i : e_i - e.lipschitz * (a_i - a));
  }
  return best;
}

double LowestLevelScanner::upper_bound(const Entry& e, double a) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a_i, e_i] : e.history) {
    best = std::min(best, a <= a_i ? e_i : e_i + e.lipschitz * (a - a_i));
  }
  return best;
}

double LowestLevelScanner::lowest_nonvacuum(const AggregateParams& params, double margin) {
  sync(params);
  double best = std::numeric_limits<double>::infinity();
  for (auto& e : entries_) {
    const double bound = lower_bound(e, params.interaction);
    best = std::min(best, bound > margin ? bound : evaluate(e, params));
  }
  return best;
}

bool LowestLevelScanner::has_level_below(const AggregateParams& params, double threshold) {
  sync(params);
  for (auto& e : entries_) {
    if (upper_bound(e, params.interaction) < threshold) return true;
  }
  for (auto& e : entries_) {
    if (lower_bound(e, params.interaction) >= threshold) continue;
    if (evaluate(e, params) < threshold) return true;
  }
  return false;
}

double locate_ground_crossing(const AggregateParams& params, double lo, double hi, double tol) {
  params.validate();
  if (!(lo < hi) || !(tol > 0.0)) throw ConfigError("crossing search needs lo < hi and tol > 0");
  LowestLevelScanner scanner(params.n_sites);
  AggregateParams p = params;
  auto below = [&](double a) {
    p.interaction = a;
    return scanner.has_level_below(p, 0.0);
  };
  if (!below(lo) || below(hi)) {
    throw ConfigError("ground-state crossing is not bracketed by the A interval");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SubspaceTables::SubspaceTables(int n_sites, int total_excitations, bool zero_momentum)
    : basis_(n_sites, total_excitations, zero_momentum) {
  const int m_max = basis_.max_excitons();
  sectors_.reserve(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    auto sector = make_molecular_sector(n_sites, basis_.block_configs(m));
    sector.excitons = m;
    if (zero_momentum) sector.momentum = 0;
    sectors_.push_back(std::move(sector));
  }
  for (int m = 0; m < m_max; ++m) {
    lowering_.push_back(lowering_matrix(sectors_[m].configs, sectors_[m + 1].configs));
  }
}

FdOperators assemble_fd(const SubspaceTables& tables, const AggregateParams& params,
                        const CavityParams& cavity, double g) {
  params.validate();
  cavity.validate();
  if (!(g >= 0.0)) throw ConfigError("coupling g must be non-negative");
  const auto& basis = tables.basis();
  if (basis.n_sites() != params.n_sites) throw ConfigError("tables built for a different N");

  const auto dim = static_cast<Eigen::Index>(basis.dim());
  const int total = basis.total_excitations();
  FdOperators out;
  out.hamiltonian.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  out.molecular.matrix = Eigen::MatrixXcd::Zero(dim, dim);

  for (int m = 0; m <= basis.max_excitons(); ++m) {
    const auto off = static_cast<Eigen::Index>(basis.block_offset(m));
    const auto size = static_cast<Eigen::Index>(basis.block_size(m));
    if (size == 0) continue;
    const Eigen::MatrixXcd hm = molecular_matrix(params, tables.sector(m));
    out.molecular.matrix.block(off, off, size, size) = hm;
    out.molecular.blocks.push_back({off, size});
    auto diag = out.hamiltonian.matrix.block(off, off, size, size);
    diag = hm;
    diag.diagonal().array() += cavity.omega_c * (total - m);

    if (m < basis.max_excitons() && basis.block_size(m + 1) > 0) {
      const auto off_up = static_cast<Eigen::Index>(basis.block_offset(m + 1));
      const auto size_up = static_cast<Eigen::Index>(basis.block_size(m + 1));
      // <Ntot-m, chi_m| g S^- c^+ |Ntot-m-1, eta_{m+1}> = g sqrt(Ntot-m) F
      out.hamiltonian.matrix.block(off, off_up, size, size_up) =
          (g * std::sqrt(static_cast<double>(total - m))) * tables.lowering(m);
    }
  }
  mirror_upper(out.hamiltonian.matrix);
  return out;
}

HermitianOperator assemble_fd(const AggregateParams& params, const CavityParams& cavity, double g,
                              int total_excitations, bool zero_momentum) {
  const SubspaceTables tables(params.n_sites, total_excitations, zero_momentum);
  return assemble_fd(tables, params, cavity, g).hamiltonian;
}

}  // namespace oqb
