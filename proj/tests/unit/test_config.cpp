#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "oqb/config.hpp"
#include "oqb/error.hpp"

using namespace oqb;

namespace {

bool throws_with(const std::string& text, const std::string& fragment) {
  try {
    parse_run_config(KeyValueFile::parse(text));
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(fragment) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("key-value parsing") {
  const auto kv = KeyValueFile::parse(
      "# comment\n"
      "N = 10   # trailing\n"
      "\n"
      "  A_values = 0.1, 0.2 ,0.3\n"
      "flag = yes\n");
  CHECK(kv.get_int("N", 0) == 10);
  CHECK(kv.get_doubles("A_values") == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_double("missing", 2.5) == 2.5);
  CHECK_FALSE(kv.has("missing"));
  CHECK_THROWS_AS(KeyValueFile::parse("N = 1\nN = 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse(" = 3\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("N = ten\n").get_int("N", 0), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("x = 1.5abc\n").get_double("x", 0), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("b = maybe\n").get_bool("b", false), ConfigError);
}

TEST_CASE("run config defaults") {
  const auto cfg = parse_run_config(KeyValueFile::parse(""));
  CHECK(cfg.aggregate.n_sites == 14);
  CHECK(cfg.aggregate.hopping == -0.2);
  CHECK(cfg.aggregate.interaction == 0.8);
  CHECK(cfg.cavity.omega_c == 1.0);
  CHECK(cfg.photons_for(14) == 14);
  CHECK(cfg.photons_for(9) == 9);
  CHECK(cfg.coupling.mode == Normalization::kDensity);
  CHECK(cfg.coupling.value == 0.5);
  CHECK(cfg.grid.step == 0.01);
  CHECK(cfg.grid.t_max == 100.0);
  CHECK(cfg.zero_momentum);
  CHECK(cfg.n_levels == 100);
}

TEST_CASE("run config values") {
  const auto cfg = parse_run_config(KeyValueFile::parse(
      "N = 8\nJ_over_omega = 0.1\nA_over_omega = -0.3\nn_ph = 3\n"
      "coupling.mode = norm2\ncoupling.value = 0.04\ncoupling.schedule = step\n"
      "dt = 0.05\nt_max = 20\nzero_momentum = false\n"
      "A_start = -0.2\nA_stop = 0.2\nA_step = 0.1\n"
      "g_values = 0.3, 0.5\nN_values = 6, 8, 10\nn_levels = 7\n"));
  CHECK(cfg.aggregate.n_sites == 8);
  CHECK(cfg.aggregate.hopping == 0.1);
  CHECK(cfg.aggregate.interaction == -0.3);
  CHECK(cfg.photons_for(8) == 3);
  CHECK(cfg.coupling.mode == Normalization::kFixedCavity);
  CHECK(cfg.coupling.value == 0.04);
  CHECK(cfg.grid.size() == 401);
  CHECK_FALSE(cfg.zero_momentum);
  CHECK(cfg.interaction_values == std::vector<double>{-0.2, -0.1, 0.0, 0.1, 0.2});
  CHECK(cfg.coupling_values == std::vector<double>{0.3, 0.5});
  CHECK(cfg.n_values == std::vector<int>{6, 8, 10});
  CHECK(cfg.n_levels == 7);
}

TEST_CASE("run config rejections") {
  CHECK(throws_with("Nsites = 4\n", "unknown config key 'Nsites'"));
  CHECK(throws_with("coupling.mode = norm3\n", "coupling.mode"));
  CHECK(throws_with("coupling.schedule = ramp\n", "step turn-on"));
  CHECK(throws_with("coupling.value = -1\n", "coupling.value"));
  CHECK(throws_with("dt = 0\n", "time grid"));
  CHECK(throws_with("n_levels = 0\n", "n_levels"));
  CHECK(throws_with("N = 0\n", ""));
  CHECK(throws_with("n_ph = -2\n", ""));
}

TEST_CASE("config file loading") {
  const auto path = std::filesystem::temp_directory_path() / "oqb_test_config.txt";
  {
    std::ofstream out(path);
    out << "N = 6\nA_values = 0.5\n";
  }
  const auto cfg = load_run_config(path);
  CHECK(cfg.aggregate.n_sites == 6);
  CHECK(cfg.interaction_values == std::vector<double>{0.5});
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_run_config(path), ConfigError);
}

TEST_CASE("arange") {
  const auto a = arange(-0.95, 1.5, 0.05);
  CHECK(a.size() == 50);
  CHECK(a.front() == -0.95);
  CHECK(a[35] == 0.8);
  CHECK(a.back() == 1.5);
  CHECK(arange(0.0, 1.0, 0.25) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(arange(1.0, 0.0, 0.1).empty());
  CHECK_THROWS_AS(arange(0.0, 1.0, 0.0), ConfigError);
}
