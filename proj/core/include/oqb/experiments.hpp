#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "oqb/config.hpp"
#include "oqb/dynamics.hpp"
#include "oqb/hamiltonian.hpp"
#include "oqb/params.hpp"

namespace oqb {

struct ChargeResult {
  Trajectory trajectory;
  ChargingSummary summary;
  double g = 0.0;
  std::size_t dim = 0;
};

/// One charging run: vacuum-launched, |n_ph> photons, step turn-on of g.
/// `tables` may be shared across runs with the same (N, n_ph, filter).
ChargeResult run_charge(const SubspaceTables& tables, const AggregateParams& aggregate,
                        const CavityParams& cavity, const CouplingSpec& coupling,
                        const TimeGrid& grid);
ChargeResult run_charge(const RunConfig& cfg);

struct SweepPoint {
  double parameter = 0.0;
  int n_sites = 0;
  ChargingSummary summary;
  double wall_seconds = 0.0;
  bool rejected = false;
  bool guard_tripped = false;  // rejected by a numerical guard, not by invalid input
  std::string reason;
};

struct SweepResult {
  std::string parameter_name;
  std::vector<SweepPoint> points;

  /// Parameter value of the largest accepted e_max / p_max.
  double argmax_energy() const;
  double argmax_power() const;
};

/// Calls fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). fn must not share mutable state across indices.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

SweepResult sweep_interaction(const RunConfig& cfg, std::span<const double> a_values, int threads);
/// Local refinement of an A-sweep: a sub-grid of spacing grid_step / 5
/// within one grid step of each argmax (restricted to A/omega > -1).
struct ArgmaxRefinement {
  double grid_step = 0.0;
  double refine_step = 0.0;
  double a_max_energy = 0.0;
  double e_max_density = 0.0;
  double a_max_power = 0.0;
  double p_max_density = 0.0;
  SweepResult extra;  // the sub-grid evaluations only
};
ArgmaxRefinement refine_interaction_argmax(const RunConfig& cfg, const SweepResult& grid_sweep,
                                           double grid_step, int threads);

SweepResult sweep_coupling(const RunConfig& cfg, std::span<const double> g_values, int threads);
SweepResult sweep_scaling(const RunConfig& cfg, std::span<const int> n_values, int threads);

struct ScalingFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  int n_min = 0;
  int n_max = 0;
  std::size_t points = 0;
};

/// Least squares of ln y against ln N. Needs >= 4 points and y > 0.
ScalingFit fit_power_law(std::span<const double> n, std::span<const double> y);

struct ScalingFits {
  ScalingFit energy;
  ScalingFit power;
};
ScalingFits fit_scaling(const SweepResult& sweep);

/// CSV: A_over_omega,level,energy,n_ex,excitons,momentum,multiplicity,is_ground
void write_spectrum_csv(std::ostream& out, const AggregateParams& base,
                        std::span<const double> a_values, std::size_t n_levels);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
std::string summary_json(const ChargingSummary& s, const RunConfig& cfg, double g);
/// Sweep metadata: requested grid, argmax on the grid, refinement if any.
std::string sweep_json(const SweepResult& sweep, const RunConfig& cfg,
                       const ArgmaxRefinement* refinement);
std::string fits_json(const ScalingFits& fits, const RunConfig& cfg);

struct OracleReport {
  double max_matrix_deviation = 0.0;
  double max_trajectory_deviation = 0.0;
  std::size_t cases = 0;
};

/// Compares the subspace machinery with the brute-force oracle for every N
/// in `n_values` (N <= 8) at the configured J, A, coupling, over omega*t <= t_max.
OracleReport oracle_check(const RunConfig& cfg, std::span<const int> n_values, double t_max);

}  // namespace oqb
