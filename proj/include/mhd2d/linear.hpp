#pragma once

#include <array>

#include "mhd2d/kinematics.hpp"

namespace mhd2d {

enum class Dissipation { viscous, damped };

// Viscous: u_t - nu Lap u = m^2 d2^2 eta. Damped: u_t + kappa u = m^2 d2^2 eta.
// `coefficient` is nu or kappa.
struct LinearParams {
  Dissipation kind = Dissipation::viscous;
  double coefficient = 0.0;
  double m = 1.0;

  // Per-mode damping rate d: nu |k|^2 or kappa.
  double damping(double k_squared) const noexcept {
    return kind == Dissipation::viscous ? coefficient * k_squared : coefficient;
  }
};

struct LinearModeState {
  double k1 = 0.0;
  double k2 = 0.0;
  std::array<Complex, 2> eta_hat{};
  std::array<Complex, 2> u_hat{};
  LinearParams params;
};

using RealMat2 = std::array<std::array<double, 2>, 2>;

// exp(t M) for M = [[0, 1], [-omega_sq, -d]] acting on (eta, u), continuous
// across the critical case d^2 = 4 omega_sq.
RealMat2 mode_propagator(double d, double omega_sq, double t);

LinearModeState evolve_mode_exact(const LinearModeState& mode, double t);

struct LinearFields {
  VectorField eta;
  VectorField u;
};

// Mode-wise exact evolution of divergence-free data. Throws PreconditionError
// when either input is not divergence free (apply compute_correctors first).
LinearFields evolve_linear_field(const VectorField& eta0, const VectorField& u0,
                                 const LinearParams& params, double t);

struct Correctors {
  VectorField eta_r;
  VectorField u_r;
  SpectralField q1;
  SpectralField q2;
};

// d_k((A - I)_lk X_l), the perturbation part of J div_A X. It equals
// div_{A - I} X whenever J = 1, and always has zero mean.
SpectralField perturbed_divergence(const GeometryBundle& geo, const VectorField& x);

// Zero-mean gradient fields with div(eta0 + eta_r) = 0 and
// div u_r = div_{A - I} u0, plus the matching Stokes gauge pressures.
Correctors compute_correctors(const VectorField& eta0, const VectorField& u0,
                              const GeometryBundle& geometry0);

}  // namespace mhd2d
