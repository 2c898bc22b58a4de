#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <doctest.h>

#include "oqb/error.hpp"
#include "oqb/params.hpp"

using namespace oqb;

namespace {

double prefactor(double eps0, double d) { return 1.0 / (4.0 * std::numbers::pi * eps0 * d * d * d); }

Vec3 rotate(const Eigen::Matrix3d& r, const Vec3& v) {
  const Eigen::Vector3d out = r * Eigen::Vector3d(v[0], v[1], v[2]);
  return {out[0], out[1], out[2]};
}

}  // namespace

TEST_CASE("perpendicular transition dipole gives J = mu^2 / (4 pi eps0 d^3)") {
  DipoleGeometry g{{0.0, 1.3, 0.0}, {0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}, 0.7};
  const auto c = dipole_couplings(g);
  CHECK(c.hopping == doctest::Approx(1.3 * 1.3 * prefactor(0.7, 2.0)).epsilon(1e-14));
}

TEST_CASE("parallel transition dipole gives J = -2 mu^2 / (4 pi eps0 d^3)") {
  DipoleGeometry g{{0.0, 0.0, 0.9}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.5}, 1.0};
  const auto c = dipole_couplings(g);
  CHECK(c.hopping == doctest::Approx(-2.0 * 0.81 * prefactor(1.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("zero static dipole gives A = 0") {
  DipoleGeometry g{{0.3, 0.1, 0.2}, {0.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, 1.0};
  CHECK(dipole_couplings(g).interaction == 0.0);
}

TEST_CASE("static dipole enters A with the same point-dipole form") {
  DipoleGeometry g{{0.0, 0.0, 0.0}, {0.0, 0.5, 0.0}, {1.0, 0.0, 0.0}, 1.0};
  CHECK(dipole_couplings(g).interaction == doctest::Approx(0.25 * prefactor(1.0, 1.0)));
}

TEST_CASE("zero displacement is a degenerate geometry") {
  DipoleGeometry g{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 1.0};
  CHECK_THROWS_AS(dipole_couplings(g), ConfigError);
  CHECK_THROWS_WITH(dipole_couplings(g), doctest::Contains("degenerate geometry"));
}

TEST_CASE("dipole couplings are invariant under a common rotation") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    DipoleGeometry g{{normal(rng), normal(rng), normal(rng)},
                     {normal(rng), normal(rng), normal(rng)},
                     {normal(rng), normal(rng), normal(rng)},
                     0.5 + std::abs(normal(rng))};
    const Eigen::Quaterniond q =
        Eigen::Quaterniond(normal(rng), normal(rng), normal(rng), normal(rng)).normalized();
    const Eigen::Matrix3d r = q.toRotationMatrix();
    DipoleGeometry rotated{rotate(r, g.transition_dipole), rotate(r, g.static_dipole),
                           rotate(r, g.displacement), g.eps0};
    const auto a = dipole_couplings(g);
    const auto b = dipole_couplings(rotated);
    const double scale_j = std::max(std::abs(a.hopping), 1e-300);
    const double scale_a = std::max(std::abs(a.interaction), 1e-300);
    CHECK(std::abs(a.hopping - b.hopping) / scale_j < 1e-12);
    CHECK(std::abs(a.interaction - b.interaction) / scale_a < 1e-12);
  }
}

TEST_CASE("resolve_coupling under both normalizations") {
  AggregateParams p;
  p.omega = 1.0;

  p.n_sites = 16;
  CHECK(resolve_coupling(CouplingSpec::density(0.5), p) == doctest::Approx(0.125).epsilon(1e-15));

  p.n_sites = 10;
  CHECK(resolve_coupling(CouplingSpec::fixed_cavity(0.25), p) == 0.25);

  p.n_sites = 9;
  CHECK(resolve_coupling(CouplingSpec::density(1.2), p) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("normalization I keeps g sqrt(N) / omega fixed, normalization II keeps g fixed") {
  for (double omega : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 30; ++n) {
      AggregateParams p{n, omega, -0.2, 0.0};
      const double g1 = resolve_coupling(CouplingSpec::density(0.7), p);
      CHECK(g1 * std::sqrt(double(n)) / omega == doctest::Approx(0.7).epsilon(1e-14));
      CHECK(resolve_coupling(CouplingSpec::fixed_cavity(0.3), p) / omega ==
            doctest::Approx(0.3).epsilon(1e-15));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((AggregateParams{0, 1.0, 0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((AggregateParams{31, 1.0, 0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((AggregateParams{4, 0.0, 0.0, 0.0}.validate()), ConfigError);
  CHECK_THROWS_AS((AggregateParams{4, 1.0, NAN, 0.0}.validate()), ConfigError);
  CHECK_NOTHROW((AggregateParams{4, 1.0, -0.2, 0.8}.validate()));
  CHECK_THROWS_AS((CavityParams{0.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((CavityParams{1.0, -1}.validate()), ConfigError);
  AggregateParams p{4, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(resolve_coupling(CouplingSpec::density(-0.1), p), ConfigError);
}
