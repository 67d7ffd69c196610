#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mhd2d/kinematics.hpp"
#include "mhd2d/linear.hpp"

namespace mhd2d {

// One row of a time series. Labels sort alphabetically, which fixes the CSV
// column order.
struct EnergyRecord {
  double t = 0.0;
  std::map<std::string, double> norms;
  std::map<std::string, double> residuals;
};

// ||d2^i (grad eta, u, m d2 eta)||_{n-i}^2, i <= n <= 4.
double energy_functional(const VectorField& eta, const VectorField& u, double m, int n, int i);
double energy_functional(const FlowMapState& state, int n, int i);

// ||u||_0^2 + ||m d2 eta||_0^2
double mechanical_energy(const FlowMapState& state);

// ||(eta, u)||_4^2 + ||m eta||_{5,2}^2, the damped-case energy.
double damped_energy(const FlowMapState& state);

// Sobolev norm of the Eulerian field F(x) = f(zeta^{-1}(x)), computed on the
// label grid with x-derivatives realized as grad_A. Uses det grad zeta = 1.
double eulerian_sobolev_norm(const GeometryBundle& geo, const VectorField& f, int s);

// Composite Simpson rule on possibly uneven samples; an odd trailing
// interval is integrated with the quadratic through the last three points.
double simpson(std::span<const double> t, std::span<const double> f);

struct EnergySample {
  double t = 0.0;
  double energy = 0.0;       // ||u||_0^2 + ||m d2 eta||_0^2
  double dissipation = 0.0;  // 2 nu ||grad_A u||_0^2 or 2 kappa ||u||_0^2
};

// |E(T) + int_0^T D - E(0)| / E(0). Needs at least 3 samples.
double energy_identity_residual(std::span<const EnergySample> series);

enum class DecayKind { power, exponential };

struct DecayFit {
  DecayKind kind = DecayKind::power;
  // power: slope of log N against log(1 + t); exponential: rate r in N ~ e^{-r t}
  double exponent_or_rate = 0.0;
  double standard_error = 0.0;
  double intercept = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

// Least squares over samples with t in [t_min, t_max]. Needs >= 8 samples in
// the window; nonpositive values throw DomainError.
DecayFit fit_decay(std::span<const double> t, std::span<const double> values, DecayKind kind,
                   double t_min, double t_max);

// Per-time differences between a nonlinear run and its linearization.
// Labels: eta_d_H3_sq, um_d_H2_sq, um_d_H2_sq_weighted, damped_error.
EnergyRecord linear_error_record(const FlowMapState& run, const FlowMapState& linear);

struct LinearErrorSummary {
  double sup_eta_d_H3_sq = 0.0;
  double integral_um_d_H2_sq = 0.0;
  double sup_damped_error = 0.0;
  // sup eta_d_H3^2 + int (u_d, m d2 eta_d)_H2^2
  double viscous_metric() const noexcept { return sup_eta_d_H3_sq + integral_um_d_H2_sq; }
};

// Throws StructuralError when the two trajectories have different lengths or
// times.
std::vector<EnergyRecord> linear_error_metrics(std::span<const FlowMapState> run,
                                               std::span<const FlowMapState> linear);
LinearErrorSummary summarize_linear_errors(std::span<const EnergyRecord> records);

struct SweepPoint {
  double m = 0.0;
  double value = 0.0;
};

struct SweepResult {
  double slope = 0.0;
  double standard_error = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Log-log slope of value against m; >= 3 points with m strictly increasing.
SweepResult msweep_slope(std::span<const SweepPoint> points);

}  // namespace mhd2d
