#include "oqb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "oqb/error.hpp"

namespace oqb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
  }
}

int to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const std::set<std::string> kKnownKeys = {
    "N", "J_over_omega", "A_over_omega", "omega_c_over_omega", "n_ph",
    "coupling.mode", "coupling.value", "coupling.schedule",
    "dt", "t_max", "zero_momentum",
    "A_values", "A_start", "A_stop", "A_step",
    "g_values", "N_values", "n_levels"};

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.values_.emplace(key, value).second) {
      throw ConfigError("config key '" + key + "' given twice");
    }
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? to_double(key, *v) : fallback;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  const auto v = get(key);
  return v ? to_int(key, *v) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + *v + "'");
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const {
  std::vector<double> out;
  if (const auto v = get(key)) {
    for (const auto& item : split_list(*v)) out.push_back(to_double(key, item));
  }
  return out;
}

std::vector<int> KeyValueFile::get_ints(const std::string& key) const {
  std::vector<int> out;
  if (const auto v = get(key)) {
    for (const auto& item : split_list(*v)) out.push_back(to_int(key, item));
  }
  return out;
}

void KeyValueFile::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

std::vector<double> arange(double start, double stop, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  // rounded so that e.g. -0.95 + 35 * 0.05 prints as 0.8
  for (long i = 0; i <= count; ++i) {
    out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return out;
}

RunConfig parse_run_config(const KeyValueFile& kv) {
  kv.require_known(kKnownKeys);
  RunConfig cfg;
  cfg.aggregate.n_sites = kv.get_int("N", cfg.aggregate.n_sites);
  cfg.aggregate.omega = 1.0;
  cfg.aggregate.hopping = kv.get_double("J_over_omega", cfg.aggregate.hopping);
  cfg.aggregate.interaction = kv.get_double("A_over_omega", cfg.aggregate.interaction);
  cfg.cavity.omega_c = kv.get_double("omega_c_over_omega", 1.0);
  if (kv.has("n_ph")) {
    cfg.n_photons_from_n = false;
    cfg.cavity.n_photons = kv.get_int("n_ph", 0);
  } else {
    cfg.cavity.n_photons = cfg.aggregate.n_sites;
  }

  const std::string mode = kv.get("coupling.mode").value_or("norm1");
  if (mode == "norm1") {
    cfg.coupling.mode = Normalization::kDensity;
  } else if (mode == "norm2") {
    cfg.coupling.mode = Normalization::kFixedCavity;
  } else {
    throw ConfigError("coupling.mode must be norm1 or norm2, got '" + mode + "'");
  }
  cfg.coupling.value = kv.get_double("coupling.value", cfg.coupling.value);
  if (const auto schedule = kv.get("coupling.schedule"); schedule && *schedule != "step") {
    throw ConfigError("only the step turn-on schedule is supported, got '" + *schedule + "'");
  }
  if (!(cfg.coupling.value >= 0.0)) throw ConfigError("coupling.value must be >= 0");

  cfg.grid.step = kv.get_double("dt", cfg.grid.step);
  cfg.grid.t_max = kv.get_double("t_max", cfg.grid.t_max);
  (void)cfg.grid.size();
  cfg.zero_momentum = kv.get_bool("zero_momentum", true);

  cfg.interaction_values = kv.get_doubles("A_values");
  if (cfg.interaction_values.empty() && kv.has("A_start")) {
    cfg.interaction_values = arange(kv.get_double("A_start", 0.0), kv.get_double("A_stop", 0.0),
                                    kv.get_double("A_step", 0.05));
  }
  cfg.coupling_values = kv.get_doubles("g_values");
  cfg.n_values = kv.get_ints("N_values");
  const int levels = kv.get_int("n_levels", 100);
  if (levels < 1) throw ConfigError("n_levels must be >= 1");
  cfg.n_levels = static_cast<std::size_t>(levels);

  cfg.aggregate.validate();
  cfg.cavity.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(KeyValueFile::load(path));
}

}  // namespace oqb
