#pragma once

#include <vector>

#include "mhd2d/kinematics.hpp"
#include "mhd2d/stepping.hpp"

namespace mhd2d {

// Eulerian velocity v and magnetic perturbation b = M - m e2.
struct EulerianState {
  explicit EulerianState(const Grid& g) : v(g), b(g) {}
  EulerianState(VectorField v_, VectorField b_, double t_, double nu_, double kappa_, double m_)
      : v(std::move(v_)), b(std::move(b_)), t(t_), nu(nu_), kappa(kappa_), m(m_) {}

  const Grid& grid() const noexcept { return v.grid(); }

  VectorField v;
  VectorField b;
  double t = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
  double m = 0.0;
};

// ETD-RK4 for
//   v_t + v.grad v + grad p = nu Lap v - kappa v + m d2 b + b.grad b
//   b_t + v.grad b = m d2 v + b.grad v,   div v = div b = 0.
// The m d2 coupling and the dissipation are exact per mode; advection is
// explicit and Leray-projected.
class EulerianStepper {
 public:
  explicit EulerianStepper(const Grid& grid);

  EulerianState step(const EulerianState& state, const StepControl& control);

  // max |v| dt / h, which must not exceed 1.
  static double cfl_number(const EulerianState& state, double dt);

  // Explicit right-hand side (N_v, N_b).
  std::pair<VectorField, VectorField> nonlinear_term(const EulerianState& state) const;

 private:
  void prepare(const EulerianState& state, double dt);

  Grid grid_;
  double dt_ = 0.0, nu_ = -1.0, kappa_ = -1.0, m_ = -1.0;
  // per mode: E, E_half, Q, f1, f2, f3 as full complex 2x2 matrices
  std::vector<Complex> coeffs_;
};

EulerianState step_eulerian(const EulerianState& state, const StepControl& control);

}  // namespace mhd2d
