#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "mhd2d/kinematics.hpp"

namespace mhd2d {

enum class DataFamily { cellular, random_symmetric, from_file };

struct InitialDataSpec {
  DataFamily family = DataFamily::cellular;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  // largest |mode index| per axis for random data
  int band = 2;
  double m = 1.0;
  // L2 size of the random velocity profile relative to the cellular family
  double velocity_scale = 1.0;
  std::string path;  // from_file only
};

struct InitialData {
  VectorField eta;
  VectorField u;
  int constraint_iterations = 0;
  int velocity_iterations = 0;
};

// eta0 = eps * eta_bar + g with det(I + grad eta0) = 1 and u0 = u_bar + w with
// J div_A u0 = 0, where g, w are zero-mean gradients and
// eta_bar = u_bar = (sin y1 cos y2, -cos y1 sin y2).
InitialData generate_cellular(double epsilon, const Grid& grid);

// Same constraint enforcement applied to random band-limited, divergence
// free, odevity symmetric profiles. Deterministic in the seed.
InitialData generate_random_symmetric(const InitialDataSpec& spec, const Grid& grid);

// Solve det(I + grad eta) = 1 for eta = base + grad(psi) by fixed point on
// div eta = d1 eta2 d2 eta1 - d1 eta1 d2 eta2. Throws ConvergenceError when the
// amplitude is too large for the iteration to contract.
VectorField enforce_volume_preservation(const VectorField& base, int* iterations = nullptr);

// Add the zero-mean gradient w making J div_A (u + w) = 0 for the geometry of
// eta.
VectorField enforce_div_A_free(const VectorField& eta, const VectorField& u,
                               int* iterations = nullptr);

struct ValidationReport {
  double det_residual = 0.0;       // max |det grad zeta - 1|
  double div_A_residual = 0.0;     // ||div_A u||_0
  double odevity_residual = 0.0;   // max over eta, u
  double mean_residual = 0.0;      // max |zero mode| over all components
  double energy_2_0 = 0.0;
  double energy_2_1 = 0.0;
  double norm3 = 0.0;              // ||(eta, u, m d2 eta)||_3
  double norm4 = 0.0;              // ||(eta, u, m d2 eta)||_4
  double mu = std::numeric_limits<double>::infinity();
};

ValidationReport validate(const VectorField& eta0, const VectorField& u0, double m);

}  // namespace mhd2d
