#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhd2d/config.hpp"
#include "mhd2d/diagnostics.hpp"
#include "mhd2d/initial_data.hpp"
#include "mhd2d/kinematics.hpp"

namespace mhd2d {

using Json = nlohmann::json;

struct PreparedData {
  explicit PreparedData(const Grid& g) : state(g) {}
  FlowMapState state;
  ValidationReport validation;
  int constraint_iterations = 0;
  int velocity_iterations = 0;
};

// Initial Lagrangian state for field strength m on the config grid. The
// epsilon of the data is cfg.epsilon_for(m).
PreparedData prepare_initial_state(const SimConfig& cfg, double m);
PreparedData prepare_initial_state(const SimConfig& cfg, double m, const Grid& grid);

struct TrajectoryOptions {
  bool eulerian_norms = false;
  bool damped_norms = false;
  bool keep_states = false;
  // Called with every recorded state, after its record is stored.
  std::function<void(const FlowMapState&, EnergyRecord&)> on_record;
};

struct Trajectory {
  explicit Trajectory(const Grid& g) : final_state(g) {}
  std::vector<EnergyRecord> records;
  std::vector<FlowMapState> states;  // recorded states when keep_states
  std::vector<EnergySample> energy;  // every step
  FlowMapState final_state;
  double dt = 0.0;
  int steps = 0;
  double energy_residual = 0.0;
  double max_det_drift = 0.0;  // max over steps of max |det grad zeta - 1|
  double max_div_A = 0.0;      // max over steps of ||div_A u||_0
  double max_odevity = 0.0;
  long pressure_iterations = 0;
  double wall_seconds = 0.0;
};

// Integrates for cfg.t_end from initial.t. dt = cfg.dt, or the default
// stability-based step when cfg.dt <= 0, shrunk so the run lands on t_end.
// States are recorded at step 0, every record_every steps and at the end.
Trajectory run_trajectory(const FlowMapState& initial, const SimConfig& cfg,
                          const TrajectoryOptions& options = {});

// A quantitative pass/fail check: value relation threshold.
struct Gate {
  std::string name;
  std::string claim;
  double value = 0.0;
  std::string relation;  // "<=", "<", ">", ">="
  double threshold = 0.0;
  bool passed = false;
};

Gate make_gate(std::string name, std::string claim, double value, std::string relation,
               double threshold);
Json gate_to_json(const Gate& gate);
Json fit_to_json(const std::string& quantity, const DecayFit& fit);

struct DecayAnalysis {
  std::vector<std::pair<std::string, DecayFit>> fits;
  std::vector<Gate> gates;
  Json details;
};

// Power fits of v_H1, v_H2, b_H2 against targets -1.5, -1, -0.5, boundedness
// of the weighted quantities, velocity-faster-than-field ordering and
// no-growth of E_2_0 after the stability window.
DecayAnalysis analyze_viscous_decay(std::span<const EnergyRecord> records, const SimConfig& cfg);
// Exponential fit of damped_energy on [damped_fit_start, end].
DecayAnalysis analyze_damped_decay(std::span<const EnergyRecord> records, const SimConfig& cfg);

// Data amplitude used for sweep member m: fixed_energy keeps m * epsilon at
// its reference value, fixed_data keeps epsilon.
double sweep_epsilon(const SimConfig& cfg, double m);

struct SweepMember {
  double m = 0.0;
  double epsilon = 0.0;
  double value = 0.0;  // the error functional fed to the slope fit
  LinearErrorSummary summary;
  std::vector<EnergyRecord> records;
  double max_det_drift = 0.0;
  double wall_seconds = 0.0;
};

// Nonlinear run against the exact linear evolution of corrector-adjusted data.
SweepMember run_sweep_member(const SimConfig& cfg, double m);

struct SweepOutcome {
  std::vector<SweepMember> members;
  SweepResult fit;
};

SweepOutcome run_msweep(const SimConfig& cfg, int threads);

struct CompareResolution {
  int n = 0;
  double dt = 0.0;
  double lagrangian_norm = 0.0;   // ||u(T)||_0
  double eulerian_norm = 0.0;     // ||v(T)||_0
  double relative_difference = 0.0;
  double frozen_in = 0.0;         // frozen_in_residual at T
  double flow_map_difference = 0.0;  // tracked vs Lagrangian eta, relative L2
};

struct CompareOutcome {
  CompareResolution fine;
  CompareResolution coarse;
};

CompareResolution run_compare_at(const SimConfig& cfg, int n, double dt);
CompareOutcome run_compare(const SimConfig& cfg);

// Exact linear trajectory from corrector-adjusted config data.
std::vector<EnergyRecord> linear_trajectory(const SimConfig& cfg);

Json config_to_json(const SimConfig& cfg);
Json validation_to_json(const ValidationReport& report);

struct ScenarioResult {
  Json summary;
  std::vector<Gate> gates;
  bool passed() const;
};

// Subcommands. Each writes its artifacts and summary.json under out.
ScenarioResult command_run(const SimConfig& cfg, const std::filesystem::path& out);
ScenarioResult command_decay(const SimConfig& cfg, const std::filesystem::path& out);
ScenarioResult command_msweep(const SimConfig& cfg, const std::filesystem::path& out, int threads);
ScenarioResult command_compare(const SimConfig& cfg, const std::filesystem::path& out);
ScenarioResult command_linear(const SimConfig& cfg, const std::filesystem::path& out);
ScenarioResult command_gen_ic(const SimConfig& cfg, const std::filesystem::path& out);

}  // namespace mhd2d
