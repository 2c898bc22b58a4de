#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqb/error.hpp"
#include "oqb/experiments.hpp"

using namespace oqb;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.aggregate = {6, 1.0, -0.2, 0.8};
  cfg.coupling = CouplingSpec::density(0.5);
  cfg.grid = {0.05, 30.0};
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("power-law fit") {
  const std::vector<double> n{6, 8, 10, 12, 14};
  SUBCASE("exact power law") {
    std::vector<double> y;
    for (double x : n) y.push_back(2.0 * x);
    const auto f = fit_power_law(n, y);
    CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.n_min == 6);
    CHECK(f.n_max == 14);
    CHECK(f.points == 5);
  }
  SUBCASE("constant data") {
    const std::vector<double> y(n.size(), 0.7);
    const auto f = fit_power_law(n, y);
    CHECK(std::abs(f.exponent) < 1e-12);
    CHECK(f.prefactor == doctest::Approx(0.7));
  }
  SUBCASE("noisy square root") {
    std::mt19937 rng(7);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> xs, y;
    for (int x = 6; x <= 30; x += 2) {
      xs.push_back(x);
      y.push_back(std::sqrt(x) * (1.0 + noise(rng)));
    }
    CHECK(std::abs(fit_power_law(xs, y).exponent - 0.5) < 0.02);
  }
  SUBCASE("invalid input") {
    const std::vector<double> y{1, 2, 3};
    CHECK_THROWS_AS(fit_power_law(std::vector<double>{1, 2, 3}, y), ConfigError);
    CHECK_THROWS_AS(fit_power_law(n, y), ConfigError);
    CHECK_THROWS_AS(fit_power_law(n, std::vector<double>{1, 2, 0, 4, 5}), ConfigError);
    CHECK_THROWS_AS(fit_power_law(std::vector<double>{4, 4, 4, 4}, std::vector<double>{1, 2, 3, 4}),
                    ConfigError);
  }
}

TEST_CASE("single charging run") {
  const auto cfg = small_config();
  const auto r = run_charge(cfg);
  CHECK(r.dim == SubspaceBasis(6, 6, true).dim());
  CHECK(r.g == doctest::Approx(0.5 / std::sqrt(6.0)));
  CHECK(r.trajectory.times.size() == cfg.grid.size());
  CHECK(r.summary.e_max_density > 0.0);
  CHECK(r.summary.e_max_density <= 1.5);

  std::ostringstream csv;
  write_trajectory_csv(csv, r.trajectory);
  const auto rows = lines(csv.str());
  CHECK(rows.front() == "omega_t,e_density,p_density");
  CHECK(rows.size() == cfg.grid.size() + 1);

  const auto j = nlohmann::json::parse(summary_json(r.summary, cfg, r.g));
  CHECK(j["e_max_density"].get<double>() == r.summary.e_max_density);
  CHECK(j["config"]["N"].get<int>() == 6);
  CHECK(j["config"]["coupling"]["mode"] == "norm1");
}

TEST_CASE("sweeps are deterministic and consistent with single runs") {
  auto cfg = small_config();
  const std::vector<double> as{-1.2, -0.5, 0.8};
  const auto a = sweep_interaction(cfg, as, 3);
  const auto b = sweep_interaction(cfg, as, 1);
  REQUIRE(a.points.size() == 3);
  CHECK(a.parameter_name == "A_over_omega");
  CHECK(a.points[0].rejected);
  CHECK_FALSE(a.points[0].guard_tripped);
  CHECK(a.points[0].reason.find("non-vacuum ground state unsupported") != std::string::npos);
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK_FALSE(a.points[i].rejected);
    CHECK(a.points[i].summary.e_max_density == b.points[i].summary.e_max_density);
    CHECK(a.points[i].summary.t_at_p_max == b.points[i].summary.t_at_p_max);
  }
  cfg.aggregate.interaction = 0.8;
  CHECK(a.points[2].summary.e_max_density == run_charge(cfg).summary.e_max_density);

  std::ostringstream csv;
  write_sweep_csv(csv, a);
  const auto rows = lines(csv.str());
  CHECK(rows.size() == 4);
  CHECK(rows[0].rfind("A_over_omega,N,e_max_density", 0) == 0);
  CHECK(rows[1].find(",1,\"") != std::string::npos);

  const auto j = nlohmann::json::parse(sweep_json(a, cfg, nullptr));
  CHECK(j["rejected"].get<int>() == 1);
  CHECK(j["values"].size() == 3);
  CHECK(j["argmax_energy"].get<double>() == a.argmax_energy());
  CHECK_FALSE(j.contains("refinement"));
}

TEST_CASE("argmax refinement") {
  auto cfg = small_config();
  cfg.grid = {0.05, 20.0};
  const std::vector<double> as{0.0, 0.5, 1.0};
  const auto grid = sweep_interaction(cfg, as, 0);
  const auto r = refine_interaction_argmax(cfg, grid, 0.5, 0);
  CHECK(r.refine_step == doctest::Approx(0.1));
  for (const auto& p : r.extra.points) {
    CHECK(p.parameter > -1.0);
    const double k = p.parameter / 0.1;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
  CHECK(r.e_max_density >= grid.points[1].summary.e_max_density - 1e-15);
  CHECK(std::abs(r.a_max_energy - grid.argmax_energy()) <= 0.5 + 1e-12);
  const auto j = nlohmann::json::parse(sweep_json(grid, cfg, &r));
  CHECK(j["refinement"]["a_max_energy"].get<double>() == r.a_max_energy);
  CHECK_THROWS_AS(refine_interaction_argmax(cfg, grid, 0.0, 0), ConfigError);
}

TEST_CASE("coupling and size sweeps") {
  auto cfg = small_config();
  const std::vector<double> gs{0.3, 0.8};
  const auto sg = sweep_coupling(cfg, gs, 0);
  CHECK(sg.parameter_name == "g_sqrtN_over_omega");
  CHECK(sg.points.size() == 2);
  cfg.coupling = CouplingSpec::fixed_cavity(0.1);
  CHECK(sweep_coupling(cfg, gs, 0).parameter_name == "g_over_omega");

  cfg.coupling = CouplingSpec::density(0.5);
  const std::vector<int> ns{0, 4, 5, 6, 7};
  const auto sn = sweep_scaling(cfg, ns, 0);
  CHECK(sn.points[0].rejected);
  for (std::size_t i = 1; i < ns.size(); ++i) CHECK_FALSE(sn.points[i].rejected);
  const auto fits = fit_scaling(sn);
  CHECK(fits.energy.points == 4);
  const auto j = nlohmann::json::parse(fits_json(fits, cfg));
  CHECK(j["e_max_density"]["exponent"].get<double>() == fits.energy.exponent);
}

TEST_CASE("spectrum csv") {
  std::ostringstream csv;
  const std::vector<double> as{-1.0, 0.5};
  write_spectrum_csv(csv, {6, 1.0, -0.2, 0.0}, as, 5);
  const auto rows = lines(csv.str());
  CHECK(rows.size() == 11);
  CHECK(rows[0] == "A_over_omega,level,energy,n_ex,excitons,momentum,multiplicity,is_ground");
  int ground_at_minus_one = 0;
  for (std::size_t i = 1; i <= 5; ++i) ground_at_minus_one += rows[i].back() == '1';
  CHECK(ground_at_minus_one == 2);
}

TEST_CASE("oracle check") {
  auto cfg = small_config();
  const std::vector<int> ns{2, 4};
  const auto rep = oracle_check(cfg, ns, 10.0);
  CHECK(rep.cases == 2);
  CHECK(rep.max_matrix_deviation < 1e-12);
  CHECK(rep.max_trajectory_deviation < 1e-8);
  const std::vector<int> big{9};
  CHECK_THROWS_AS(oracle_check(cfg, big, 1.0), ConfigError);
}

TEST_CASE("parallel_for propagates failures") {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](std::size_t i) {
                                 if (i == 3) throw NumericalGuardError("boom");
                               }),
                  NumericalGuardError);
}
