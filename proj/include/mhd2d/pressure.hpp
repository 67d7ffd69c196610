#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mhd2d/kinematics.hpp"

namespace mhd2d {

struct EllipticSolveReport {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  // max |A - I| over the grid exceeded 0.5, where contraction is not assured
  bool weak_contraction = false;
};

struct EllipticOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
  // consecutive residual increases tolerated before giving up
  int growth_limit = 5;
};

// Divergence-form kernels built from a geometry bundle. With J = det grad zeta:
//   weighted_laplacian(f)  = d_k(J G_kj d_j f),  J G = cof^T A   (= J lap_A f)
//   weighted_divergence(X) = d_k(cof_lk X_l)                     (= J div_A X)
// Flux products are dealiased before the outer derivative, so both outputs
// have exactly zero mean.
class LagrangianKernels {
 public:
  explicit LagrangianKernels(const GeometryBundle& geo);

  const GeometryBundle& geometry() const noexcept { return *geo_; }
  SpectralField weighted_laplacian(const SpectralField& f) const;
  SpectralField weighted_divergence(const VectorField& x) const;
  // lap_A f computed as weighted_laplacian(f) / J.
  SpectralField laplacian_A(const SpectralField& f) const;
  VectorField laplacian_A(const VectorField& x) const;
  // weighted_divergence(grad_A f), the operator whose inverse the projection
  // applies.
  SpectralField projection_operator(const SpectralField& f) const;

 private:
  const GeometryBundle* geo_;
  std::array<std::vector<double>, 3> metric_;  // J G: (1,1), (1,2)=(2,1), (2,2)
  std::vector<double> inv_jacobian_;
};

// Right-hand side of the pressure equation in weighted form:
//   m^2 d_k(cof_lk d2^2 eta_l) + 2 det(grad u)
// the velocity part written as 2 (d1(u1 d2 u2) - d2(u1 d1 u2)).
SpectralField pressure_forcing(const LagrangianKernels& kernels, const VectorField& u, double m);

struct PressureSolution {
  SpectralField q;
  EllipticSolveReport report;
};

// Preconditioned fixed point q <- q + Lap^{-1}(f - J lap_A q) with zero-mean q.
// Throws ConvergenceError on sustained residual growth or when the iteration
// cap is hit.
PressureSolution solve_lagrangian_pressure(const LagrangianKernels& kernels, const VectorField& u,
                                           double m, const EllipticOptions& options = {},
                                           const SpectralField* initial_guess = nullptr);
PressureSolution solve_lagrangian_pressure(const GeometryBundle& geo, const VectorField& u,
                                           double m, const EllipticOptions& options = {});

struct ProjectionResult {
  VectorField u;
  SpectralField phi;
  EllipticSolveReport report;
};

// u = u* - grad_A phi with J div_A u = 0 to the solver tolerance.
ProjectionResult project_div_A_free(const LagrangianKernels& kernels, const VectorField& u_star,
                                    const EllipticOptions& options = {},
                                    const SpectralField* initial_guess = nullptr);
ProjectionResult project_div_A_free(const GeometryBundle& geo, const VectorField& u_star,
                                    const EllipticOptions& options = {});

}  // namespace mhd2d
