#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mhd2d/initial_data.hpp"
#include "mhd2d/stepping.hpp"

namespace YAML {
class Node;
}

namespace mhd2d {

// YAML config flattened to dotted keys (`grid: {n: 64}` becomes `grid.n`).
// Values are typed when read; every key must be consumed, so typos surface as
// errors naming the key and line.
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text, const std::string& origin = "<config>");
  static ConfigDocument load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  // Throws FormatError listing keys never read.
  void require_all_used() const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

 private:
  const std::string* find(const std::string& key) const;
  void flatten(const YAML::Node& node, const std::string& prefix);
  [[noreturn]] void fail(const std::string& key, const std::string& expected) const;

  std::string origin_;
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
  mutable std::set<std::string> used_;
};

enum class SweepScaling { fixed_energy, fixed_data };

struct SimConfig {
  // grid
  int n = 64;
  double period = 6.283185307179586;
  // physics
  double nu = 0.05;
  double kappa = 0.0;
  double m = 20.0;
  // data; epsilon <= 0 means epsilon = 1/m
  InitialDataSpec data;
  // stepping; dt <= 0 picks the default from the stability bound
  double dt = 1e-3;
  Scheme scheme = Scheme::etd_rk4;
  double t_end = 1.0;
  int record_every = 10;
  bool odevity_project = false;
  bool dealias = true;
  double pressure_tolerance = 1e-10;
  int max_iterations = 200;
  // diagnostics toggles
  bool eulerian_norms = false;
  bool damped_norms = false;
  // decay gates
  double fit_start = -1.0;  // < 0: last 60 % of the run
  double fit_end = -1.0;
  double reference_end = 20.0;
  double slope_tolerance = 0.25;
  double weighted_growth_limit = 2.0;
  double velocity_margin = 0.25;
  double damped_fit_start = 5.0;
  double min_r_squared = 0.98;
  double stability_factor = 1.05;
  double stability_window = 1.0;
  double companion_m = 0.0;  // > 0: second damped run whose rate must agree
  double rate_agreement = 0.3;
  // sweep
  std::vector<double> m_list{16.0, 32.0, 64.0, 128.0};
  SweepScaling scaling = SweepScaling::fixed_energy;
  double sweep_slope_target = -1.0;
  double sweep_slope_tolerance = 0.3;
  // compare
  int compare_coarse_n = 32;
  double compare_coarse_dt = 1e-3;
  double compare_tolerance = 1e-3;
  double frozen_in_tolerance = 1e-3;
  int tracker_stride = 10;

  bool viscous() const noexcept { return nu > 0.0; }
  double epsilon_for(double m_value) const noexcept {
    return data.epsilon > 0.0 ? data.epsilon : 1.0 / m_value;
  }
  StepControl step_control(double dt_value) const;
};

SimConfig sim_config_from(const ConfigDocument& doc);
// Field-level checks; throws FormatError with the offending key.
void validate_config(const SimConfig& cfg, bool lagrangian_run);

std::string to_string(DataFamily f);
std::string to_string(Scheme s);
std::string to_string(SweepScaling s);

}  // namespace mhd2d
