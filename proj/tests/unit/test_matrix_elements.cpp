#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oqb/error.hpp"
#include "oqb/matrix_elements.hpp"
#include "oqb/oracle.hpp"
#include "support.hpp"

using namespace oqb;
using oqb::test::max_abs;

namespace {

// <chi| S^-_j |eta> from explicit plane-wave Slater states.
cplx site_lowering(const FermionConfig& eta, const FermionConfig& chi, int j) {
  const auto se = oracle::slater_state(eta);
  const auto sc = oracle::slater_state(chi);
  const std::uint32_t bit = 1u << (j - 1);
  cplx amp = 0.0;
  for (std::uint32_t s = 0; s < (1u << eta.n_sites()); ++s) {
    if (s & bit) amp += std::conj(sc[s & ~bit]) * se[s];
  }
  return amp;
}

std::vector<Eigen::VectorXcd> slater_block(const std::vector<FermionConfig>& configs) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& c : configs) out.push_back(oracle::slater_state(c));
  return out;
}

// Orbital on the same grid carrying the opposite momentum.
FermionConfig reflect(const FermionConfig& cfg) {
  const int n = cfg.n_sites();
  const int particles = cfg.count();
  std::vector<int> out;
  for (int eta : cfg.orbitals()) {
    const int target = MomentumIndex(-wave_number(n, particles, eta).value(), n).value();
    for (int e = 1; e <= n; ++e) {
      if (wave_number(n, particles, e).value() == target) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return FermionConfig::from_orbitals(n, out);
}

}  // namespace

TEST_CASE("delta_2pi is an exact congruence") {
  CHECK(delta_2pi(MomentumIndex(8, 4)) == 1);    // 2 pi with N = 4
  CHECK(delta_2pi(MomentumIndex(1, 3)) == 0);    // pi / 3 with N = 3
  CHECK(delta_2pi(MomentumIndex(-20, 5)) == 1);  // -4 pi with N = 5
  CHECK(delta_2pi(MomentumIndex(0, 7)) == 1);
}

TEST_CASE("momentum_diff") {
  const auto vac = FermionConfig::vacuum(4);
  CHECK(momentum_diff(vac, vac).is_zero());
  CHECK(momentum_diff(FermionConfig::from_orbitals(4, std::vector<int>{3}), vac).is_zero());
  CHECK(momentum_diff(FermionConfig::from_orbitals(4, std::vector<int>{1}), vac) ==
        MomentumIndex(-4, 4));
}

TEST_CASE("h for a single particle is 1") {
  for (int n = 1; n <= 8; ++n) {
    for (int eta = 1; eta <= n; ++eta) {
      const auto c = FermionConfig::from_orbitals(n, std::vector<int>{eta});
      CHECK(h_func(c, FermionConfig::vacuum(n)) == cplx(1.0, 0.0));
    }
  }
}

TEST_CASE("h matches site-resolved overlaps of explicit Slater states") {
  // |<chi|S^-_j|eta>| = 2^m N^{-1/2-m} |h| on every site, and consecutive
  // sites differ by the phase exp(i Delta).
  auto check_pair = [](const FermionConfig& eta, const FermionConfig& chi) {
    const int n = eta.n_sites();
    const int m = chi.count();
    const cplx h = h_func(eta, chi);
    const double pref = std::pow(2.0, m) * std::pow(double(n), -0.5 - m);
    const double delta = momentum_diff(eta, chi).radians();
    cplx prev = site_lowering(eta, chi, 1);
    CHECK(std::abs(std::abs(prev) - pref * std::abs(h)) < 1e-12);
    for (int j = 2; j <= n; ++j) {
      const cplx amp = site_lowering(eta, chi, j);
      CHECK(std::abs(amp - prev * std::polar(1.0, delta)) < 1e-12);
      prev = amp;
    }
  };
  check_pair(FermionConfig::from_orbitals(4, std::vector<int>{1, 2}),
             FermionConfig::from_orbitals(4, std::vector<int>{3}));
  for (int n = 2; n <= 6; ++n) {
    for (int m = 0; m < n; ++m) {
      for (const auto& chi : sector_configs(n, m)) {
        for (const auto& eta : sector_configs(n, m + 1)) check_pair(eta, chi);
      }
    }
  }
}

TEST_CASE("|h| is invariant under reflection of all momenta") {
  for (int n = 2; n <= 8; ++n) {
    for (int m = 0; m < n; ++m) {
      for (const auto& chi : sector_configs(n, m)) {
        const auto chi_r = reflect(chi);
        for (const auto& eta : sector_configs(n, m + 1)) {
          const double a = std::abs(h_func(eta, chi));
          const double b = std::abs(h_func(reflect(eta), chi_r));
          CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        }
      }
    }
  }
}

TEST_CASE("hbar basics") {
  for (int n = 1; n <= 8; ++n) {
    const auto vac = FermionConfig::vacuum(n);
    CHECK(std::abs(hbar_func(vac, vac) - cplx(n, 0.0)) < 1e-12);
  }
  const int n = 6;
  for (int m = 0; m <= 3; ++m) {
    const auto configs = sector_configs(n, m);
    for (const auto& a : configs) {
      for (const auto& b : configs) {
        CHECK(std::abs(hbar_func(a, b) - std::conj(hbar_func(b, a))) < 1e-12);
      }
    }
  }
}

TEST_CASE("hbar matches <chi|S^-_1 S^+_1|chi'> up to a diagonal phase") {
  // sum over all (n+1)-tuples is a completeness relation:
  // hbar = pref^-2 e^{i theta} <chi|(1 - n_1)|chi'> e^{-i theta'}
  const int n = 6;
  for (int m = 0; m <= 2; ++m) {
    const double pref = std::pow(2.0, m) * std::pow(double(n), -0.5 - m);
    const auto configs = sector_configs(n, m);
    const auto states = slater_block(configs);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      for (std::size_t k = 0; k < configs.size(); ++k) {
        cplx direct = 0.0;
        for (std::uint32_t s = 0; s < (1u << n); ++s) {
          if (!(s & 1u)) direct += std::conj(states[i][s]) * states[k][s];
        }
        direct /= pref * pref;
        const cplx hb = hbar_func(configs[i], configs[k]);
        CHECK(std::abs(std::abs(hb) - std::abs(direct)) < 1e-10);
        if (i == k) CHECK(std::abs(hb - direct) < 1e-10);
      }
    }
  }
}

TEST_CASE("memoized hbar reproduces the direct sum") {
  MatElemCache cache(7);
  for (int m = 0; m <= 3; ++m) {
    const auto configs = sector_configs(7, m);
    for (const auto& a : configs) {
      for (const auto& b : configs) CHECK(cache.hbar(a, b) == hbar_func(a, b));
    }
  }
}

TEST_CASE("F from vacuum to one exciton") {
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXcd lower = oracle::lowering_operator(n);
    const auto vac = FermionConfig::vacuum(n);
    for (int eta = 1; eta <= n; ++eta) {
      const auto one = FermionConfig::from_orbitals(n, std::vector<int>{eta});
      const cplx f = f_elem(one, vac);
      const cplx expected = wave_number(n, 1, eta).is_zero() ? std::sqrt(double(n)) : 0.0;
      CHECK(std::abs(f - expected) < 1e-12);
      const cplx direct =
          oracle::slater_state(vac).dot(lower * oracle::slater_state(one));
      CHECK(std::abs(f - direct) < 1e-12);
    }
  }
}

TEST_CASE("F vanishes exactly between different momentum sectors") {
  const int n = 6;
  for (int m = 0; m < n; ++m) {
    for (const auto& chi : sector_configs(n, m)) {
      for (const auto& eta : sector_configs(n, m + 1)) {
        if (!momentum_diff(eta, chi).is_zero()) CHECK(f_elem(eta, chi) == cplx(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("F matches the oracle overlap <chi|sum S^-|eta>") {
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXcd lower = oracle::lowering_operator(n);
    for (int m = 0; m < n; ++m) {
      const auto rows = sector_configs(n, m);
      const auto cols = sector_configs(n, m + 1);
      const Eigen::MatrixXcd f = lowering_matrix(rows, cols);
      const auto rs = slater_block(rows);
      const auto cs = slater_block(cols);
      double dev = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
          dev = std::max(dev, std::abs(f(i, k) - rs[i].dot(lower * cs[k])));
        }
      }
      CHECK_MESSAGE(dev < 1e-10, "N = " << n << ", m = " << m << ", deviation " << dev);
    }
  }
}

TEST_CASE("Gbar on the vacuum is N/4") {
  for (int n = 1; n <= 10; ++n) {
    const auto vac = FermionConfig::vacuum(n);
    CHECK(std::abs(gbar_elem(vac, vac) - cplx(n / 4.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("Gbar matches the oracle for N = 8, m = 2 and is Hermitian") {
  const int n = 8;
  const Eigen::MatrixXcd szsz = oracle::szsz_operator(n);
  const auto configs = sector_configs(n, 2);
  const auto states = slater_block(configs);
  MatElemCache cache(n);
  double dev = 0.0;
  double herm = 0.0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    CHECK(std::abs(gbar_elem(configs[i], configs[i], cache).imag()) < 1e-12);
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const cplx g = gbar_elem(configs[i], configs[k], cache);
      dev = std::max(dev, std::abs(g - states[i].dot(szsz * states[k])));
      herm = std::max(herm, std::abs(g - std::conj(gbar_elem(configs[k], configs[i], cache))));
      if (!momentum_diff(configs[i], configs[k]).is_zero()) CHECK(g == cplx(0.0, 0.0));
    }
  }
  CHECK(dev < 1e-9);
  CHECK(herm < 1e-12);
}

TEST_CASE("Gbar sector traces match the oracle for N <= 8") {
  for (int n = 2; n <= 8; ++n) {
    const Eigen::MatrixXcd szsz = oracle::szsz_operator(n);
    MatElemCache cache(n);
    for (int m = 0; m <= n; ++m) {
      cplx trace = 0.0;
      double oracle_trace = 0.0;
      for (const auto& c : sector_configs(n, m)) trace += gbar_elem(c, c, cache);
      for (std::uint32_t s = 0; s < (1u << n); ++s) {
        if (std::popcount(s) == m) oracle_trace += szsz(s, s).real();
      }
      CHECK(std::abs(trace - oracle_trace) < 1e-9);
    }
  }
}

TEST_CASE("fast szsz blocks agree with the explicit chi-sum for N <= 10, m <= 3") {
  for (int n = 2; n <= 10; ++n) {
    MatElemCache cache(n);
    for (int m = 0; m <= std::min(3, n); ++m) {
      for (int k : sector_momenta(n, m)) {
        const auto configs = sector_configs(n, m, k);
        const double dev = max_abs(szsz_matrix(configs) - szsz_matrix_reference(configs, cache));
        CHECK_MESSAGE(dev < 1e-10, "N = " << n << ", m = " << m << ", k = " << k);
      }
    }
  }
}

TEST_CASE("fast szsz blocks match the oracle in every sector for N <= 8") {
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXcd szsz = oracle::szsz_operator(n);
    for (int m = 0; m <= n; ++m) {
      for (int k : sector_momenta(n, m)) {
        const auto configs = sector_configs(n, m, k);
        const auto states = slater_block(configs);
        const Eigen::MatrixXcd fast = szsz_matrix(configs);
        double dev = 0.0;
        for (std::size_t i = 0; i < configs.size(); ++i) {
          for (std::size_t j = 0; j < configs.size(); ++j) {
            dev = std::max(dev, std::abs(fast(i, j) - states[i].dot(szsz * states[j])));
          }
        }
        CHECK_MESSAGE(dev < 1e-10, "N = " << n << ", m = " << m << ", k = " << k);
      }
    }
  }
}

TEST_CASE("mismatched particle numbers are rejected") {
  const auto one = FermionConfig::from_orbitals(5, std::vector<int>{2});
  const auto two = FermionConfig::from_orbitals(5, std::vector<int>{1, 2});
  CHECK_THROWS_AS(h_func(one, one), ConfigError);
  CHECK_THROWS_AS(f_elem(one, two), ConfigError);
  CHECK_THROWS_AS(hbar_func(one, two), ConfigError);
  CHECK_THROWS_AS(gbar_elem(one, two), ConfigError);
}
