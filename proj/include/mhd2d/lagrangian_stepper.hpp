#pragma once

#include <optional>
#include <vector>

#include "mhd2d/kinematics.hpp"
#include "mhd2d/stepping.hpp"

namespace mhd2d {

struct LagrangianStepReport {
  int pressure_iterations = 0;  // summed over stages
  int projection_iterations = 0;
  double projection_residual = 0.0;
  double min_jacobian = 1.0;
  double max_jacobian = 1.0;
};

// Exponential integrator for
//   eta_t = u,  u_t + grad_A q - nu lap_A u + kappa u = m^2 d2^2 eta,  div_A u = 0.
// The pair (eta, u) under the constant-coefficient part is advanced exactly
// per mode; nu (lap_A - Lap) u - grad_A q is explicit. Every step ends with a
// div_A projection and zeroed means.
//
// The stepper keeps warm starts for the elliptic solves and, for imex_bdf2,
// the previous step; reuse one instance along a single trajectory.
class LagrangianStepper {
 public:
  explicit LagrangianStepper(const Grid& grid);

  FlowMapState step(const FlowMapState& state, const StepControl& control);

  // Largest admissible dt: h / max(1, max |u|).
  static double stability_bound(const FlowMapState& state);
  static double default_dt(const FlowMapState& state) { return 0.25 * stability_bound(state); }

  const LagrangianStepReport& last_report() const noexcept { return report_; }

  // Explicit part of u_t at the given state.
  VectorField nonlinear_term(const FlowMapState& state);

 private:
  struct Coefficients {
    double dt = 0.0, nu = 0.0, kappa = 0.0, m = 0.0;
    // per mode: E (4), E_half (4), then column 2 of Q, f1, f2, f3 (2 each)
    std::vector<double> data;
  };

  void prepare(const FlowMapState& state, double dt);
  FlowMapState finish(FlowMapState next, const StepControl& control);
  FlowMapState step_etd(const FlowMapState& state, const StepControl& control);
  FlowMapState step_bdf2(const FlowMapState& state, const StepControl& control);
  VectorField evaluate(const FlowMapState& state, const StepControl& control);

  Grid grid_;
  Coefficients coeffs_;
  std::optional<SpectralField> pressure_guess_;
  std::optional<SpectralField> projection_guess_;
  LagrangianStepReport report_;

  // imex_bdf2 history
  std::optional<FlowMapState> previous_;
  std::optional<VectorField> previous_nonlinear_;
  double history_dt_ = 0.0;
};

// One step with a fresh stepper (no warm start, no history).
FlowMapState step_lagrangian_viscous(const FlowMapState& state, const StepControl& control);
FlowMapState step_lagrangian_damped(const FlowMapState& state, const StepControl& control);

}  // namespace mhd2d
