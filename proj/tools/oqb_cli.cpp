// oqb: batch driver for charging runs, parameter sweeps, size scaling,
// molecular spectra and the two-exciton perturbative analysis.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical guard tripped.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oqb/config.hpp"
#include "oqb/error.hpp"
#include "oqb/experiments.hpp"
#include "oqb/perturbation.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  bool extended = false;
};

oqb::RunConfig load(const CommonOptions& opts) {
  if (opts.config_path.empty()) return oqb::parse_run_config(oqb::KeyValueFile{});
  return oqb::load_run_config(opts.config_path);
}

std::ofstream open_out(const CommonOptions& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  const fs::path path = fs::path(opts.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw oqb::ConfigError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return out;
}

void print_sweep_extrema(const oqb::SweepResult& sweep) {
  std::size_t rejected = 0;
  for (const auto& p : sweep.points) rejected += p.rejected ? 1 : 0;
  std::cout << "points: " << sweep.points.size() << " (rejected " << rejected << ")\n";
  if (rejected < sweep.points.size()) {
    std::cout << "argmax e_max_density at " << sweep.parameter_name << " = "
              << sweep.argmax_energy() << '\n'
              << "argmax p_max_density at " << sweep.parameter_name << " = "
              << sweep.argmax_power() << '\n';
  }
}

// 2 if any point tripped a numerical guard, 1 if every point was rejected.
int sweep_status(const oqb::SweepResult& sweep) {
  std::size_t rejected = 0;
  std::size_t guarded = 0;
  for (const auto& p : sweep.points) {
    rejected += p.rejected ? 1 : 0;
    guarded += p.guard_tripped ? 1 : 0;
  }
  if (guarded > 0) {
    std::cerr << "numerical guard: tripped at " << guarded << " sweep point(s)\n";
    return 2;
  }
  if (rejected == sweep.points.size()) {
    std::cerr << "config error: no sweep point was accepted\n";
    return 1;
  }
  return 0;
}

int cmd_charge(const CommonOptions& opts) {
  const auto cfg = load(opts);
  const auto result = oqb::run_charge(cfg);
  auto csv = open_out(opts, "trajectory.csv");
  oqb::write_trajectory_csv(csv, result.trajectory);
  const std::string json = oqb::summary_json(result.summary, cfg, result.g);
  open_out(opts, "summary.json") << json << '\n';
  std::cout << json << '\n';
  return 0;
}

double smallest_spacing(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double step = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (d > 1e-12 && (step == 0.0 || d < step)) step = d;
  }
  return step;
}

int cmd_sweep_a(const CommonOptions& opts) {
  auto cfg = load(opts);
  if (cfg.interaction_values.empty()) cfg.interaction_values = oqb::arange(-0.95, 1.5, 0.05);
  const auto sweep = oqb::sweep_interaction(cfg, cfg.interaction_values, opts.threads);
  auto csv = open_out(opts, "sweep_a.csv");
  oqb::write_sweep_csv(csv, sweep);
  print_sweep_extrema(sweep);

  const bool any_accepted = std::any_of(sweep.points.begin(), sweep.points.end(),
                                        [](const oqb::SweepPoint& p) { return !p.rejected; });
  const double step = smallest_spacing(cfg.interaction_values);
  std::optional<oqb::ArgmaxRefinement> refinement;
  if (any_accepted && cfg.interaction_values.size() >= 3 && step > 0.0) {
    refinement = oqb::refine_interaction_argmax(cfg, sweep, step, opts.threads);
    auto refined = open_out(opts, "sweep_a_refined.csv");
    oqb::write_sweep_csv(refined, refinement->extra);
    std::cout << "refined A_max,E = " << refinement->a_max_energy
              << ", A_max,P = " << refinement->a_max_power << '\n';
  }
  open_out(opts, "sweep_a.json") << oqb::sweep_json(sweep, cfg, refinement ? &*refinement : nullptr)
                                 << '\n';
  const int status = sweep_status(sweep);
  return status != 0 || !refinement ? status : sweep_status(refinement->extra);
}

int cmd_sweep_g(const CommonOptions& opts) {
  auto cfg = load(opts);
  if (cfg.coupling_values.empty()) cfg.coupling_values = {0.3, 0.5, 0.8, 1.0, 1.2};
  const auto sweep = oqb::sweep_coupling(cfg, cfg.coupling_values, opts.threads);
  auto csv = open_out(opts, "sweep_g.csv");
  oqb::write_sweep_csv(csv, sweep);
  open_out(opts, "sweep_g.json") << oqb::sweep_json(sweep, cfg, nullptr) << '\n';
  print_sweep_extrema(sweep);
  return sweep_status(sweep);
}

int cmd_scaling(const CommonOptions& opts) {
  auto cfg = load(opts);
  if (cfg.n_values.empty()) {
    cfg.n_values = {6, 7, 8, 9, 10, 11, 12, 13, 14};
    if (opts.extended) {
      cfg.n_values.push_back(16);
      cfg.n_values.push_back(18);
    }
  }
  const auto sweep = oqb::sweep_scaling(cfg, cfg.n_values, opts.threads);
  auto csv = open_out(opts, "scaling.csv");
  oqb::write_sweep_csv(csv, sweep);
  if (const int status = sweep_status(sweep); status != 0) return status;
  const auto fits = oqb::fit_scaling(sweep);
  const std::string json = oqb::fits_json(fits, cfg);
  open_out(opts, "scaling_fit.json") << json << '\n';
  std::cout << json << '\n';
  return 0;
}

int cmd_spectrum(const CommonOptions& opts) {
  auto cfg = load(opts);
  if (cfg.interaction_values.empty()) cfg.interaction_values = oqb::arange(-1.5, 1.5, 0.05);
  const std::size_t all_levels = std::size_t{1} << cfg.aggregate.n_sites;
  auto csv = open_out(opts, "spectrum.csv");
  oqb::write_spectrum_csv(csv, cfg.aggregate, cfg.interaction_values,
                          std::min(cfg.n_levels, all_levels));
  return 0;
}

int cmd_perturbation(const CommonOptions& opts) {
  auto cfg = load(opts);
  if (cfg.interaction_values.empty()) cfg.interaction_values = oqb::arange(0.0, 1.2, 0.05);
  auto csv = open_out(opts, "perturbation.csv");
  oqb::write_perturbation_csv(csv, cfg.aggregate.n_sites, cfg.aggregate.hopping,
                              cfg.interaction_values);
  return 0;
}

int cmd_oracle_check(const CommonOptions& opts) {
  auto cfg = load(opts);
  std::vector<int> ns = cfg.n_values.empty() ? std::vector<int>{2, 4, 6} : cfg.n_values;
  const auto report = oqb::oracle_check(cfg, ns, std::min(cfg.grid.t_max, 20.0));
  std::cout << "cases: " << report.cases << '\n'
            << "max |H - P H_full P|: " << report.max_matrix_deviation << '\n'
            << "max |e_density - oracle|: " << report.max_trajectory_deviation << '\n';
  const bool ok = report.max_matrix_deviation < 1e-10 && report.max_trajectory_deviation < 1e-8;
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-diagonalization charging simulator for organic quantum batteries"};
  app.require_subcommand(1);
  CommonOptions opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "flat key = value config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads for sweeps (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--extended", opts.extended, "include N = 16, 18 in scaling runs (slow)");
  };

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const CommonOptions&);
  };
  const std::vector<Sub> subs = {
      {"charge", "single charging run: trajectory.csv + summary.json", cmd_charge},
      {"sweep-a", "maxima vs exciton-exciton interaction A/omega", cmd_sweep_a},
      {"sweep-g", "maxima vs coupling strength", cmd_sweep_g},
      {"scaling", "maxima vs N with power-law fits", cmd_scaling},
      {"spectrum", "lowest molecular levels vs A/omega", cmd_spectrum},
      {"perturbation", "two-exciton mode energies and |S|^2 vs A/omega", cmd_perturbation},
      {"oracle-check", "", cmd_oracle_check},
  };
  int (*selected)(const CommonOptions&) = nullptr;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    if (std::string(s.name) == "oracle-check") sub->group("");
    add_common(sub);
    sub->callback([&selected, run = s.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return selected(opts);
  } catch (const oqb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const oqb::NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 2;
  }
}
