#include "oqb/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "oqb/error.hpp"
#include "oqb/oracle.hpp"

namespace oqb {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

SweepPoint run_point(const SubspaceTables& tables, const AggregateParams& aggregate,
                     const CavityParams& cavity, const CouplingSpec& coupling,
                     const TimeGrid& grid, double parameter) {
  SweepPoint p;
  p.parameter = parameter;
  p.n_sites = aggregate.n_sites;
  const auto start = clock_type::now();
  try {
    p.summary = run_charge(tables, aggregate, cavity, coupling, grid).summary;
  } catch (const NumericalGuardError& e) {
    p.rejected = true;
    p.guard_tripped = true;
    p.reason = e.what();
  } catch (const ConfigError& e) {
    p.rejected = true;
    p.reason = e.what();
  }
  p.wall_seconds = seconds_since(start);
  return p;
}

const char* normalization_name(Normalization n) {
  return n == Normalization::kDensity ? "norm1" : "norm2";
}

nlohmann::json config_json(const RunConfig& cfg) {
  return {{"N", cfg.aggregate.n_sites},
          {"J_over_omega", cfg.aggregate.hopping},
          {"A_over_omega", cfg.aggregate.interaction},
          {"omega_c_over_omega", cfg.cavity.omega_c},
          {"n_ph", cfg.photons_for(cfg.aggregate.n_sites)},
          {"coupling", {{"mode", normalization_name(cfg.coupling.mode)},
                        {"value", cfg.coupling.value},
                        {"schedule", "step"}}},
          {"dt", cfg.grid.step},
          {"t_max", cfg.grid.t_max},
          {"zero_momentum", cfg.zero_momentum}};
}

}  // namespace

ChargeResult run_charge(const SubspaceTables& tables, const AggregateParams& aggregate,
                        const CavityParams& cavity, const CouplingSpec& coupling,
                        const TimeGrid& grid) {
  ChargeResult r;
  r.g = resolve_coupling(coupling, aggregate);
  const auto ops = assemble_fd(tables, aggregate, cavity, r.g);
  const auto psi0 = initial_vector(tables.basis(), cavity.n_photons, aggregate);
  const ChargingDynamics dynamics(ops.hamiltonian, ops.molecular, psi0, aggregate);
  r.trajectory = dynamics.trajectory(grid);
  r.summary = find_maxima(dynamics, r.trajectory);
  r.dim = tables.basis().dim();
  return r;
}

ChargeResult run_charge(const RunConfig& cfg) {
  CavityParams cavity = cfg.cavity;
  cavity.n_photons = cfg.photons_for(cfg.aggregate.n_sites);
  const SubspaceTables tables(cfg.aggregate.n_sites, cavity.n_photons, cfg.zero_momentum);
  return run_charge(tables, cfg.aggregate, cavity, cfg.coupling, cfg.grid);
}

double SweepResult::argmax_energy() const {
  const SweepPoint* best = nullptr;
  for (const auto& p : points) {
    if (!p.rejected && (!best || p.summary.e_max_density > best->summary.e_max_density)) best = &p;
  }
  if (!best) throw NumericalGuardError("no accepted sweep points");
  return best->parameter;
}

double SweepResult::argmax_power() const {
  const SweepPoint* best = nullptr;
  for (const auto& p : points) {
    if (!p.rejected && (!best || p.summary.p_max_density > best->summary.p_max_density)) best = &p;
  }
  if (!best) throw NumericalGuardError("no accepted sweep points");
  return best->parameter;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

SweepResult sweep_interaction(const RunConfig& cfg, std::span<const double> a_values,
                              int threads) {
  SweepResult out;
  out.parameter_name = "A_over_omega";
  out.points.resize(a_values.size());
  CavityParams cavity = cfg.cavity;
  cavity.n_photons = cfg.photons_for(cfg.aggregate.n_sites);
  const SubspaceTables tables(cfg.aggregate.n_sites, cavity.n_photons, cfg.zero_momentum);
  parallel_for(a_values.size(), threads, [&](std::size_t i) {
    AggregateParams agg = cfg.aggregate;
    agg.interaction = a_values[i] * agg.omega;
    out.points[i] = run_point(tables, agg, cavity, cfg.coupling, cfg.grid, a_values[i]);
  });
  return out;
}

ArgmaxRefinement refine_interaction_argmax(const RunConfig& cfg, const SweepResult& grid_sweep,
                                           double grid_step, int threads) {
  if (!(grid_step > 0.0)) throw ConfigError("refinement needs a positive grid step");
  ArgmaxRefinement r;
  r.grid_step = grid_step;
  r.refine_step = grid_step / 5.0;
  std::vector<double> extra;
  for (double centre : {grid_sweep.argmax_energy(), grid_sweep.argmax_power()}) {
    for (int j = -4; j <= 4; ++j) {
      const double a = std::round((centre + j * r.refine_step) * 1e12) / 1e12;
      if (j == 0 || !(a > -1.0)) continue;
      const bool known = std::any_of(extra.begin(), extra.end(),
                                     [&](double x) { return std::abs(x - a) < 1e-12; }) ||
                         std::any_of(grid_sweep.points.begin(), grid_sweep.points.end(),
                                     [&](const SweepPoint& p) { return std::abs(p.parameter - a) < 1e-12; });
      if (!known) extra.push_back(a);
    }
  }
  std::sort(extra.begin(), extra.end());
  r.extra = sweep_interaction(cfg, extra, threads);

  SweepResult all = grid_sweep;
  all.points.insert(all.points.end(), r.extra.points.begin(), r.extra.points.end());
  r.a_max_energy = all.argmax_energy();
  r.a_max_power = all.argmax_power();
  for (const auto& p : all.points) {
    if (p.rejected) continue;
    if (p.parameter == r.a_max_energy) r.e_max_density = p.summary.e_max_density;
    if (p.parameter == r.a_max_power) r.p_max_density = p.summary.p_max_density;
  }
  return r;
}

SweepResult sweep_coupling(const RunConfig& cfg, std::span<const double> g_values, int threads) {
  SweepResult out;
  out.parameter_name =
      cfg.coupling.mode == Normalization::kDensity ? "g_sqrtN_over_omega" : "g_over_omega";
  out.points.resize(g_values.size());
  CavityParams cavity = cfg.cavity;
  cavity.n_photons = cfg.photons_for(cfg.aggregate.n_sites);
  const SubspaceTables tables(cfg.aggregate.n_sites, cavity.n_photons, cfg.zero_momentum);
  parallel_for(g_values.size(), threads, [&](std::size_t i) {
    CouplingSpec c = cfg.coupling;
    c.value = g_values[i];
    out.points[i] = run_point(tables, cfg.aggregate, cavity, c, cfg.grid, g_values[i]);
  });
  return out;
}

SweepResult sweep_scaling(const RunConfig& cfg, std::span<const int> n_values, int threads) {
  SweepResult out;
  out.parameter_name = "N";
  out.points.resize(n_values.size());
  parallel_for(n_values.size(), threads, [&](std::size_t i) {
    AggregateParams agg = cfg.aggregate;
    agg.n_sites = n_values[i];
    CavityParams cavity = cfg.cavity;
    cavity.n_photons = cfg.photons_for(agg.n_sites);
    SweepPoint p;
    try {
      agg.validate();
      const SubspaceTables tables(agg.n_sites, cavity.n_photons, cfg.zero_momentum);
      p = run_point(tables, agg, cavity, cfg.coupling, cfg.grid, n_values[i]);
    } catch (const ConfigError& e) {
      p.parameter = n_values[i];
      p.n_sites = n_values[i];
      p.rejected = true;
      p.reason = e.what();
    }
    out.points[i] = p;
  });
  return out;
}

ScalingFit fit_power_law(std::span<const double> n, std::span<const double> y) {
  if (n.size() != y.size()) throw ConfigError("fit_power_law: size mismatch");
  if (n.size() < 4) throw ConfigError("fit_power_law needs at least 4 points");
  const auto count = static_cast<double>(n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(y[i] > 0.0) || !(n[i] > 0.0)) throw ConfigError("fit_power_law: nonpositive value");
    const double lx = std::log(n[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double cov = sxy - sx * sy / count;
  const double var_x = sxx - sx * sx / count;
  const double var_y = syy - sy * sy / count;
  if (!(var_x > 0.0)) throw ConfigError("fit_power_law: all N equal");
  ScalingFit fit;
  fit.exponent = cov / var_x;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / count);
  // constant data is fitted exactly
  fit.r_squared = var_y > 1e-300 ? std::clamp(cov * cov / (var_x * var_y), 0.0, 1.0) : 1.0;
  fit.n_min = static_cast<int>(std::lround(*std::min_element(n.begin(), n.end())));
  fit.n_max = static_cast<int>(std::lround(*std::max_element(n.begin(), n.end())));
  fit.points = n.size();
  return fit;
}

ScalingFits fit_scaling(const SweepResult& sweep) {
  std::vector<double> n, e, p;
  for (const auto& pt : sweep.points) {
    if (pt.rejected) continue;
    n.push_back(pt.parameter);
    e.push_back(pt.summary.e_max_density);
    p.push_back(pt.summary.p_max_density);
  }
  return {fit_power_law(n, e), fit_power_law(n, p)};
}

void write_spectrum_csv(std::ostream& out, const AggregateParams& base,
                        std::span<const double> a_values, std::size_t n_levels) {
  const auto old_precision = out.precision(17);
  out << "A_over_omega,level,energy,n_ex,excitons,momentum,multiplicity,is_ground\n";
  for (double a : a_values) {
    AggregateParams p = base;
    p.interaction = a * p.omega;
    const auto spec = molecular_spectrum(p, n_levels);
    const double tol = 1e-9 * std::max(1.0, std::abs(spec.ground_energy));
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
      const bool ground = std::abs(spec.levels[i] - spec.ground_energy) <= tol;
      out << a << ',' << i << ',' << spec.levels[i] / p.omega << ',' << spec.n_ex[i] << ','
          << spec.excitons[i] << ',' << spec.momenta[i] << ',' << spec.multiplicity[i] << ','
          << (ground ? 1 : 0) << '\n';
    }
  }
  out.precision(old_precision);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto old_precision = out.precision(17);
  out << "omega_t,e_density,p_density\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << traj.times[i] << ',' << traj.e_density[i] << ',' << traj.p_density[i] << '\n';
  }
  out.precision(old_precision);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  const auto old_precision = out.precision(17);
  out << sweep.parameter_name
      << ",N,e_max_density,t_at_e_max,p_max_density,t_at_p_max,e_boundary,p_boundary,"
         "rejected,reason,wall_seconds\n";
  for (const auto& p : sweep.points) {
    std::string reason = p.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '"', '\'');
    out << p.parameter << ',' << p.n_sites << ',';
    if (p.rejected) {
      out << ",,,,,," << 1 << ",\"" << reason << "\",";
    } else {
      out << p.summary.e_max_density << ',' << p.summary.t_at_e_max << ','
          << p.summary.p_max_density << ',' << p.summary.t_at_p_max << ','
          << (p.summary.e_max_at_boundary ? 1 : 0) << ',' << (p.summary.p_max_at_boundary ? 1 : 0)
          << ",0,,";
    }
    out.precision(6);
    out << p.wall_seconds << '\n';
    out.precision(17);
  }
  out.precision(old_precision);
}

std::string summary_json(const ChargingSummary& s, const RunConfig& cfg, double g) {
  nlohmann::json j = {{"config", config_json(cfg)},
                      {"g_over_omega", g / cfg.aggregate.omega},
                      {"e_max_density", s.e_max_density},
                      {"t_at_e_max", s.t_at_e_max},
                      {"e_max_at_boundary", s.e_max_at_boundary},
                      {"p_max_density", s.p_max_density},
                      {"t_at_p_max", s.t_at_p_max},
                      {"p_max_at_boundary", s.p_max_at_boundary},
                      {"window", {s.window_start, s.window_end}}};
  return j.dump(2);
}

std::string sweep_json(const SweepResult& sweep, const RunConfig& cfg,
                       const ArgmaxRefinement* refinement) {
  std::vector<double> values;
  std::size_t rejected = 0;
  for (const auto& p : sweep.points) {
    values.push_back(p.parameter);
    rejected += p.rejected ? 1 : 0;
  }
  nlohmann::json j = {{"config", config_json(cfg)},
                      {"parameter", sweep.parameter_name},
                      {"values", values},
                      {"rejected", rejected}};
  if (rejected < sweep.points.size()) {
    j["argmax_energy"] = sweep.argmax_energy();
    j["argmax_power"] = sweep.argmax_power();
  }
  if (refinement) {
    j["refinement"] = {{"grid_step", refinement->grid_step},
                       {"refine_step", refinement->refine_step},
                       {"a_max_energy", refinement->a_max_energy},
                       {"e_max_density", refinement->e_max_density},
                       {"a_max_power", refinement->a_max_power},
                       {"p_max_density", refinement->p_max_density}};
  }
  return j.dump(2);
}

std::string fits_json(const ScalingFits& fits, const RunConfig& cfg) {
  auto one = [](const ScalingFit& f) {
    return nlohmann::json{{"exponent", f.exponent},
                          {"prefactor", f.prefactor},
                          {"r_squared", f.r_squared},
                          {"N_range", {f.n_min, f.n_max}},
                          {"points", f.points}};
  };
  nlohmann::json j = {{"config", config_json(cfg)},
                      {"e_max_density", one(fits.energy)},
                      {"p_max_density", one(fits.power)}};
  return j.dump(2);
}

OracleReport oracle_check(const RunConfig& cfg, std::span<const int> n_values, double t_max) {
  OracleReport report;
  for (int n : n_values) {
    if (n > 8) throw ConfigError("oracle-check supports N <= 8");
    AggregateParams agg = cfg.aggregate;
    agg.n_sites = n;
    CavityParams cavity = cfg.cavity;
    cavity.n_photons = cfg.photons_for(n);
    const double g = resolve_coupling(cfg.coupling, agg);

    const SubspaceTables tables(n, cavity.n_photons, true);
    const auto ops = assemble_fd(tables, agg, cavity, g);
    const auto full = oracle::brute_force_H(agg, cavity, g, cavity.n_photons);
    const Eigen::MatrixXcd projected = oracle::project_subspace(full, tables.basis());
    report.max_matrix_deviation =
        std::max(report.max_matrix_deviation, (projected - ops.hamiltonian.matrix).cwiseAbs().maxCoeff());

    TimeGrid grid = cfg.grid;
    grid.t_max = t_max;
    const auto psi0 = initial_vector(tables.basis(), cavity.n_photons, agg);
    const auto traj = evolve_observables(ops.hamiltonian, ops.molecular, psi0, grid, agg);
    const auto obs = oracle::molecular_observable(agg, cavity.n_photons);
    const auto ref = oracle::brute_force_evolve(full, obs, oracle::product_state(full, cavity.n_photons),
                                                grid, agg);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      report.max_trajectory_deviation =
          std::max(report.max_trajectory_deviation, std::abs(traj.e_density[i] - ref.e_density[i]));
    }
    ++report.cases;
  }
  return report;
}

}  // namespace oqb
