#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oqb/dynamics.hpp"
#include "oqb/params.hpp"

namespace oqb {

/// Flat "key = value" text file. '#' starts a comment; blank lines are
/// ignored; list values are comma separated.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text);
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  /// Throws ConfigError naming the first key outside `known`.
  void require_known(const std::set<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Everything a CLI run needs, with the defaults of the charging protocol:
/// resonant cavity, n_ph = N, J-aggregate hopping, window omega*t in [0, 100].
struct RunConfig {
  AggregateParams aggregate{14, 1.0, -0.2, 0.8};
  CavityParams cavity;
  bool n_photons_from_n = true;  // n_ph follows N unless set explicitly
  CouplingSpec coupling;
  TimeGrid grid;
  bool zero_momentum = true;

  std::vector<double> interaction_values;  // sweep-a, spectrum
  std::vector<double> coupling_values;     // sweep-g
  std::vector<int> n_values;               // scaling
  std::size_t n_levels = 100;              // spectrum

  int photons_for(int n_sites) const { return n_photons_from_n ? n_sites : cavity.n_photons; }
};

RunConfig parse_run_config(const KeyValueFile& kv);
RunConfig load_run_config(const std::filesystem::path& path);

/// start, start+step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> arange(double start, double stop, double step);

}  // namespace oqb
