#include "cdiquant/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cdiquant {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", line_no);
    if (cfg.has(key)) throw config_error("duplicate key", line_no, key);
    cfg.order_.push_back(key);
    cfg.entries_.push_back({value, line_no});
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ConfigMap::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < order_.size(); ++i)
    out += order_[i] + " = " + entries_[i].value + "\n";
  return out;
}

const ConfigMap::Entry* ConfigMap::find(const std::string& key) const {
  for (std::size_t i = 0; i < order_.size(); ++i)
    if (order_[i] == key) return &entries_[i];
  return nullptr;
}

bool ConfigMap::has(const std::string& key) const { return find(key) != nullptr; }

int ConfigMap::line_of(const std::string& key) const {
  const Entry* e = find(key);
  return e ? e->line : 0;
}

std::string ConfigMap::get(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw config_error("missing required key", 0, key);
  return e->value;
}

std::string ConfigMap::get_or(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double ConfigMap::get_double(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw config_error("missing required key", 0, key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error("expected a number, got '" + e->value + "'", e->line, key);
  }
}

double ConfigMap::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ConfigMap::get_int(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw config_error("missing required key", 0, key);
  long v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw config_error("expected an integer, got '" + e->value + "'", e->line, key);
  return v;
}

long ConfigMap::get_int_or(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t ConfigMap::get_u64_or(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::uint64_t v = 0;
  const char* first = e->value.data();
  const char* last = first + e->value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw config_error("expected an unsigned integer, got '" + e->value + "'", e->line, key);
  return v;
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw config_error("missing required key", 0, key);
  std::vector<double> out;
  for (const std::string& item : split_list(e->value)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw config_error("expected a number list, got '" + e->value + "'", e->line, key);
    }
  }
  if (out.empty()) throw config_error("empty list", e->line, key);
  return out;
}

std::vector<std::string> ConfigMap::get_list(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) throw config_error("missing required key", 0, key);
  std::vector<std::string> out = split_list(e->value);
  if (out.empty()) throw config_error("empty list", e->line, key);
  return out;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] == key) {
      entries_[i].value = value;
      return;
    }
  }
  order_.push_back(key);
  entries_.push_back({value, 0});
}

void ConfigMap::set_double(const std::string& key, double value) {
  set(key, format_double(value));
}

void ConfigMap::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

bool ConfigMap::operator==(const ConfigMap& other) const {
  if (order_ != other.order_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].value != other.entries_[i].value) return false;
  return true;
}

namespace {

[[noreturn]] void bad_value(const ConfigMap& cfg, const std::string& key,
                            const std::string& message) {
  throw config_error(message, cfg.line_of(key), key);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "array.kind", "array.n_h", "array.n_v", "array.d_h", "array.d_v",
      "array.n_rings", "array.n_per_ring", "array.radii",
      "scenario.model", "scenario.n_clusters", "scenario.n_rays",
      "scenario.sigma_deg", "scenario.offset_rms_deg",
      "scenario.azimuth_mean_range_deg", "scenario.elevation_mean_range_deg",
      "scenario.as_log10_mean", "scenario.as_log10_var",
      "scenario.es_log10_mean", "scenario.es_log10_var",
      "scenario.ds_log10_mean", "scenario.ds_log10_var",
      "scenario.distance_m", "scenario.user_height_m",
      "sim.users", "sim.bits", "sim.snr_db", "sim.realizations",
      "sim.stats_samples", "sim.strategies",
      "sim.joint_rank_h", "sim.joint_rank_v", "sim.energy_threshold",
      "sim.dft_bits", "sim.coupling_bits",
      "seed",
  };
  return keys;
}

}  // namespace

ArrayGeometry array_from_config(const ConfigMap& cfg) {
  const std::string kind = cfg.get("array.kind");
  try {
    if (kind == "ura") {
      return ArrayGeometry::ura(static_cast<int>(cfg.get_int("array.n_h")),
                                static_cast<int>(cfg.get_int("array.n_v")),
                                cfg.get_double_or("array.d_h", 0.5),
                                cfg.get_double_or("array.d_v", 0.5));
    }
    if (kind == "ucca") {
      return ArrayGeometry::ucca(static_cast<int>(cfg.get_int("array.n_rings")),
                                 static_cast<int>(cfg.get_int("array.n_per_ring")),
                                 cfg.get_double_list("array.radii"));
    }
  } catch (const std::invalid_argument& e) {
    bad_value(cfg, "array.kind", e.what());
  }
  bad_value(cfg, "array.kind", "unknown array kind '" + kind + "' (expected ura or ucca)");
}

ScenarioConfig scenario_from_config(const ConfigMap& cfg) {
  const std::string model = cfg.get("scenario.model");
  ScenarioConfig sc;
  if (model == "simplified") {
    sc = ScenarioConfig::simplified(cfg.get_double_or("scenario.sigma_deg", 5.0));
  } else if (model == "umi3d") {
    sc = ScenarioConfig::umi3d(cfg.get_double_or("scenario.distance_m", 100.0));
  } else if (model == "uma3d") {
    sc = ScenarioConfig::uma3d(cfg.get_double_or("scenario.distance_m", 250.0),
                               cfg.get_double_or("scenario.user_height_m", 1.5));
  } else {
    bad_value(cfg, "scenario.model",
              "unknown scenario model '" + model + "' (expected simplified, umi3d or uma3d)");
  }
  sc.n_clusters = static_cast<int>(cfg.get_int_or("scenario.n_clusters", sc.n_clusters));
  sc.n_rays = static_cast<int>(cfg.get_int_or("scenario.n_rays", sc.n_rays));
  sc.offset_rms_deg = cfg.get_double_or("scenario.offset_rms_deg", sc.offset_rms_deg);
  sc.azimuth_mean_range_deg =
      cfg.get_double_or("scenario.azimuth_mean_range_deg", sc.azimuth_mean_range_deg);
  sc.elevation_mean_range_deg =
      cfg.get_double_or("scenario.elevation_mean_range_deg", sc.elevation_mean_range_deg);
  sc.as_log10_mean = cfg.get_double_or("scenario.as_log10_mean", sc.as_log10_mean);
  sc.as_log10_var = cfg.get_double_or("scenario.as_log10_var", sc.as_log10_var);
  sc.es_log10_mean = cfg.get_double_or("scenario.es_log10_mean", sc.es_log10_mean);
  sc.es_log10_var = cfg.get_double_or("scenario.es_log10_var", sc.es_log10_var);
  sc.ds_log10_mean = cfg.get_double_or("scenario.ds_log10_mean", sc.ds_log10_mean);
  sc.ds_log10_var = cfg.get_double_or("scenario.ds_log10_var", sc.ds_log10_var);
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    bad_value(cfg, "scenario.model", e.what());
  }
  return sc;
}

ExperimentConfig experiment_from_config(const ConfigMap& cfg) {
  for (const std::string& key : cfg.keys())
    if (known_keys().count(key) == 0)
      throw config_error("unknown key", cfg.line_of(key), key);

  ExperimentConfig ec;
  ec.geometry = array_from_config(cfg);
  ec.scenario = scenario_from_config(cfg);
  ec.n_users = static_cast<int>(cfg.get_int("sim.users"));
  ec.bits_b = static_cast<int>(cfg.get_int("sim.bits"));
  ec.snr_grid_db = cfg.get_double_list("sim.snr_db");
  ec.n_realizations = static_cast<int>(cfg.get_int("sim.realizations"));
  ec.stats_samples = static_cast<int>(cfg.get_int_or("sim.stats_samples", 10000));
  ec.master_seed = cfg.get_u64_or("seed", 1);
  ec.joint_rank_h = static_cast<int>(cfg.get_int_or("sim.joint_rank_h", 2));
  ec.joint_rank_v = static_cast<int>(cfg.get_int_or("sim.joint_rank_v", 2));
  ec.energy_threshold = cfg.get_double_or("sim.energy_threshold", 0.9);
  ec.dft_bits = static_cast<int>(cfg.get_int_or("sim.dft_bits", 8));
  ec.coupling_bits = static_cast<int>(cfg.get_int_or("sim.coupling_bits", 8));

  ec.strategies.clear();
  for (const std::string& name : cfg.get_list("sim.strategies")) {
    try {
      ec.strategies.push_back(parse_strategy(name));
    } catch (const std::invalid_argument&) {
      throw config_error("unknown strategy '" + name + "'",
                         cfg.line_of("sim.strategies"), "sim.strategies");
    }
  }
  try {
    ec.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return ec;
}

ConfigMap experiment_to_config(const ExperimentConfig& ec) {
  ConfigMap cfg;
  if (ec.geometry.kind == ArrayKind::Ura) {
    cfg.set("array.kind", "ura");
    cfg.set_int("array.n_h", ec.geometry.n_h);
    cfg.set_int("array.n_v", ec.geometry.n_v);
    cfg.set_double("array.d_h", ec.geometry.d_h);
    cfg.set_double("array.d_v", ec.geometry.d_v);
  } else {
    cfg.set("array.kind", "ucca");
    cfg.set_int("array.n_rings", ec.geometry.n_rings);
    cfg.set_int("array.n_per_ring", ec.geometry.n_per_ring);
    std::string radii;
    for (std::size_t i = 0; i < ec.geometry.radii.size(); ++i) {
      if (i) radii += ",";
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.17g", ec.geometry.radii[i]);
      radii += buf;
    }
    cfg.set("array.radii", radii);
  }

  switch (ec.scenario.model) {
    case ScenarioModel::Simplified: cfg.set("scenario.model", "simplified"); break;
    case ScenarioModel::UMi3D: cfg.set("scenario.model", "umi3d"); break;
    case ScenarioModel::UMa3D: cfg.set("scenario.model", "uma3d"); break;
  }
  cfg.set_int("scenario.n_clusters", ec.scenario.n_clusters);
  cfg.set_int("scenario.n_rays", ec.scenario.n_rays);
  cfg.set_double("scenario.sigma_deg", ec.scenario.sigma_deg);
  cfg.set_double("scenario.offset_rms_deg", ec.scenario.offset_rms_deg);
  cfg.set_double("scenario.azimuth_mean_range_deg", ec.scenario.azimuth_mean_range_deg);
  cfg.set_double("scenario.elevation_mean_range_deg", ec.scenario.elevation_mean_range_deg);
  if (ec.scenario.model != ScenarioModel::Simplified) {
    cfg.set_double("scenario.as_log10_mean", ec.scenario.as_log10_mean);
    cfg.set_double("scenario.as_log10_var", ec.scenario.as_log10_var);
    cfg.set_double("scenario.es_log10_mean", ec.scenario.es_log10_mean);
    cfg.set_double("scenario.es_log10_var", ec.scenario.es_log10_var);
    cfg.set_double("scenario.ds_log10_mean", ec.scenario.ds_log10_mean);
    cfg.set_double("scenario.ds_log10_var", ec.scenario.ds_log10_var);
    cfg.set_double("scenario.distance_m", ec.scenario.distance_m);
    cfg.set_double("scenario.user_height_m", ec.scenario.user_height_m);
  }

  cfg.set_int("sim.users", ec.n_users);
  cfg.set_int("sim.bits", ec.bits_b);
  std::string snrs;
  for (std::size_t i = 0; i < ec.snr_grid_db.size(); ++i) {
    if (i) snrs += ",";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", ec.snr_grid_db[i]);
    snrs += buf;
  }
  cfg.set("sim.snr_db", snrs);
  cfg.set_int("sim.realizations", ec.n_realizations);
  cfg.set_int("sim.stats_samples", ec.stats_samples);
  std::string strategies;
  for (std::size_t i = 0; i < ec.strategies.size(); ++i) {
    if (i) strategies += ",";
    strategies += strategy_name(ec.strategies[i]);
  }
  cfg.set("sim.strategies", strategies);
  cfg.set_int("sim.joint_rank_h", ec.joint_rank_h);
  cfg.set_int("sim.joint_rank_v", ec.joint_rank_v);
  cfg.set_double("sim.energy_threshold", ec.energy_threshold);
  cfg.set_int("sim.dft_bits", ec.dft_bits);
  cfg.set_int("sim.coupling_bits", ec.coupling_bits);
  cfg.set("seed", std::to_string(ec.master_seed));
  return cfg;
}

}  // namespace cdiquant
