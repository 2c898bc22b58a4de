#include "oqb/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oqb/error.hpp"

namespace oqb {

namespace {

constexpr int kMaxSites = 30;  // orbital masks are 32-bit

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double dipole_pair(const Vec3& mu, const Vec3& d, double eps0) {
  const double d2 = dot(d, d);
  const double dist = std::sqrt(d2);
  const double mu_d = dot(mu, d);
  return (dot(mu, mu) - 3.0 * mu_d * mu_d / d2) / (4.0 * std::numbers::pi * eps0 * d2 * dist);
}

}  // namespace

void AggregateParams::validate() const {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw ConfigError("N must lie in [1, " + std::to_string(kMaxSites) + "], got " +
                      std::to_string(n_sites));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("omega must be positive");
  if (!std::isfinite(hopping) || !std::isfinite(interaction)) {
    throw ConfigError("J and A must be finite");
  }
}

void CavityParams::validate() const {
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ConfigError("omega_c must be positive");
  if (n_photons < 0) throw ConfigError("n_ph must be non-negative");
}

double resolve_coupling(const CouplingSpec& spec, const AggregateParams& params) {
  if (params.n_sites < 1) throw ConfigError("N must be positive");
  if (!(spec.value >= 0.0) || !std::isfinite(spec.value)) {
    throw ConfigError("coupling value must be finite and non-negative");
  }
  switch (spec.mode) {
    case Normalization::kDensity:
      return spec.value * params.omega / std::sqrt(static_cast<double>(params.n_sites));
    case Normalization::kFixedCavity:
      return spec.value * params.omega;
  }
  return 0.0;
}

DipoleCouplings dipole_couplings(const DipoleGeometry& geom) {
  if (dot(geom.displacement, geom.displacement) == 0.0) {
    throw ConfigError("degenerate geometry: zero nearest-neighbour displacement");
  }
  if (!(geom.eps0 > 0.0)) throw ConfigError("eps0 must be positive");
  return {dipole_pair(geom.transition_dipole, geom.displacement, geom.eps0),
          dipole_pair(geom.static_dipole, geom.displacement, geom.eps0)};
}

}  // namespace oqb
