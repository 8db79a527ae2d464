#pragma once

#include <string>
#include <vector>

#include "cdiquant/errors.hpp"
#include "cdiquant/mu_mimo.hpp"

namespace cdiquant {

// Flat `key = value` text config with dotted section prefixes. Keys keep
// insertion order; parse(serialize(m)) reproduces m exactly. '#' starts a
// comment; blank lines are ignored. Angles are written in degrees.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);
  static ConfigMap load(const std::string& path);  // throws config_error

  std::string serialize() const;

  bool has(const std::string& key) const;
  const std::vector<std::string>& keys() const { return order_; }
  int line_of(const std::string& key) const;  // 0 when unknown

  // Getters throw config_error carrying the key (and line when parsed).
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int_or(const std::string& key, long fallback) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  bool operator==(const ConfigMap& other) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::vector<std::string> order_;
  std::vector<Entry> entries_;  // parallel to order_

  const Entry* find(const std::string& key) const;
};

ArrayGeometry array_from_config(const ConfigMap& cfg);
ScenarioConfig scenario_from_config(const ConfigMap& cfg);

// Full experiment binding; validates and reports unknown keys, unknown
// strategy names and inconsistent dimensions as config_error.
ExperimentConfig experiment_from_config(const ConfigMap& cfg);
ConfigMap experiment_to_config(const ExperimentConfig& cfg);

}  // namespace cdiquant
