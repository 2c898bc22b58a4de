#include "oqb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oqb/error.hpp"

namespace oqb {

namespace {

constexpr Eigen::Index kTimeChunk = 256;
constexpr double kNormTol = 1e-10;
constexpr double kGuardNormTol = 1e-8;
constexpr double kBlowUpTol = 1e-6;
constexpr double kRefineWidth = 1e-6;

double gershgorin_min(const Eigen::MatrixXcd& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    lo = std::min(lo, m(i, i).real() - radius);
  }
  return m.rows() == 0 ? 0.0 : lo;
}

// Maximizes f on [a, b] by golden-section search; returns (argmax, max).
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > kRefineWidth) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct Peak {
  double t;
  double value;
  bool boundary;
};

Peak refine_peak(const std::vector<double>& times, const std::vector<double>& values,
                 const std::function<double(double)>& f, std::size_t first_valid) {
  const std::size_t n = values.size();
  std::size_t best = first_valid;
  for (std::size_t i = first_valid; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  // An interior point is refined even when it is the first searched index
  // (p is searched from index 1 but is defined as 0 at t = 0).
  if (best == 0 || best + 1 == n) return {times[best], values[best], true};
  auto [t, v] = golden_max(f, times[best - 1], times[best + 1]);
  if (v < values[best]) return {times[best], values[best], false};
  return {t, v, false};
}

}  // namespace

std::size_t TimeGrid::size() const {
  if (!(step > 0.0) || !(t_max >= 0.0)) throw ConfigError("time grid needs step > 0, t_max >= 0");
  return static_cast<std::size_t>(std::llround(t_max / step)) + 1;
}

Eigen::VectorXcd initial_vector(const SubspaceBasis& basis, int n_photons,
                                const AggregateParams& params) {
  if (!(params.interaction / params.omega > -1.0)) {
    throw ConfigError("non-vacuum ground state unsupported: dynamics requires A/omega > -1");
  }
  if (basis.total_excitations() != n_photons) {
    throw ConfigError("basis excitation number must equal n_ph for a vacuum-launched state");
  }
  const auto idx = basis.find(FermionConfig::vacuum(basis.n_sites()));
  if (!idx) throw ConfigError("basis does not contain the vacuum entry");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  psi[static_cast<Eigen::Index>(*idx)] = 1.0;
  return psi;
}

ChargingDynamics::ChargingDynamics(const HermitianOperator& hamiltonian,
                                   HermitianOperator molecular, const Eigen::VectorXcd& psi0,
                                   const AggregateParams& params)
    : molecular_(std::move(molecular)),
      omega_(params.omega),
      scale_(params.n_sites * params.omega) {
  if (hamiltonian.dim() != molecular_.dim() || hamiltonian.dim() != psi0.size()) {
    throw ConfigError("hamiltonian, observable and state dimensions differ");
  }
  if (std::abs(psi0.norm() - 1.0) > kNormTol) throw ConfigError("initial state is not normalized");
  eig_ = eigh(hamiltonian.matrix);
  coeffs_ = eig_.vectors.adjoint() * psi0;
  const double e_total = psi0.dot(hamiltonian.matrix * psi0).real();
  const double rest_min = gershgorin_min(hamiltonian.matrix - molecular_.matrix);
  bound_density_ = (e_total - rest_min) / scale_;
}

Eigen::VectorXcd ChargingDynamics::phases(double omega_t) const {
  const double t = omega_t / omega_;
  Eigen::VectorXcd out(coeffs_.size());
  for (Eigen::Index a = 0; a < coeffs_.size(); ++a) {
    const double arg = -eig_.values[a] * t;
    out[a] = coeffs_[a] * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return out;
}

Eigen::VectorXcd ChargingDynamics::state(double omega_t) const {
  return eig_.vectors * phases(omega_t);
}

double ChargingDynamics::e_density(double omega_t) const {
  return molecular_.expectation(state(omega_t)) / scale_;
}

double ChargingDynamics::p_density(double omega_t) const {
  return omega_t > 0.0 ? e_density(omega_t) / omega_t : 0.0;
}

double ChargingDynamics::block_e_density(double omega_t, BlockRange block) const {
  const Eigen::VectorXcd psi = state(omega_t).segment(block.offset, block.size);
  const auto h = molecular_.matrix.block(block.offset, block.offset, block.size, block.size);
  return psi.dot(h * psi).real() / scale_;
}

double ChargingDynamics::total_energy() const {
  return (coeffs_.cwiseAbs2().transpose() * eig_.values).value();
}

Trajectory ChargingDynamics::trajectory(const TimeGrid& grid) const {
  const std::size_t n = grid.size();
  Trajectory traj;
  traj.times.resize(n);
  traj.e_density.resize(n);
  traj.p_density.resize(n);
  const Eigen::Index dim = coeffs_.size();

  for (std::size_t start = 0; start < n; start += kTimeChunk) {
    const auto cols = static_cast<Eigen::Index>(std::min<std::size_t>(kTimeChunk, n - start));
    Eigen::MatrixXcd phi(dim, cols);
    for (Eigen::Index c = 0; c < cols; ++c) phi.col(c) = phases(grid.at(start + c));
    const Eigen::MatrixXcd psi = eig_.vectors * phi;
    const Eigen::MatrixXcd h_psi = molecular_.apply(psi);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::size_t i = start + static_cast<std::size_t>(c);
      const double t = grid.at(i);
      const double norm = psi.col(c).norm();
      const double e = psi.col(c).dot(h_psi.col(c)).real() / scale_;
      if (std::abs(norm - 1.0) > kGuardNormTol) {
        std::ostringstream msg;
        msg << "norm drift " << norm - 1.0 << " at omega*t = " << t;
        throw NumericalGuardError(msg.str());
      }
      if (e > bound_density_ + kBlowUpTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "stored-energy blow-up: e_density = " << e << " exceeds bound " << bound_density_
            << " at omega*t = " << t << " (dim " << dim << ")";
        throw NumericalGuardError(msg.str());
      }
      traj.times[i] = t;
      traj.e_density[i] = e;
      traj.p_density[i] = t > 0.0 ? e / t : 0.0;
    }
  }
  return traj;
}

Trajectory evolve_observables(const HermitianOperator& hamiltonian,
                              const HermitianOperator& molecular, const Eigen::VectorXcd& psi0,
                              const TimeGrid& grid, const AggregateParams& params) {
  return ChargingDynamics(hamiltonian, molecular, psi0, params).trajectory(grid);
}

ChargingSummary find_maxima(const std::function<double(double)>& e_density,
                            const Trajectory& traj) {
  if (traj.times.empty()) throw ConfigError("empty trajectory");
  ChargingSummary s;
  s.window_start = traj.times.front();
  s.window_end = traj.times.back();

  const auto e_peak = refine_peak(traj.times, traj.e_density, e_density, 0);
  s.e_max_density = e_peak.value;
  s.t_at_e_max = e_peak.t;
  s.e_max_at_boundary = e_peak.boundary;

  // p is undefined at t = 0 and defined as 0 there; search from the first
  // positive time.
  const std::size_t first = traj.times.size() > 1 && traj.times.front() <= 0.0 ? 1 : 0;
  auto p_of = [&](double t) { return t > 0.0 ? e_density(t) / t : 0.0; };
  const auto p_peak = refine_peak(traj.times, traj.p_density, p_of, first);
  s.p_max_density = p_peak.value;
  s.t_at_p_max = p_peak.t;
  s.p_max_at_boundary = p_peak.boundary;
  return s;
}

ChargingSummary find_maxima(const ChargingDynamics& dynamics, const Trajectory& traj) {
  return find_maxima([&](double t) { return dynamics.e_density(t); }, traj);
}

}  // namespace oqb
