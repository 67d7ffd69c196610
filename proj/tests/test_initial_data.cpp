#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/initial_data.hpp"
#include "mhd2d/spectral_ops.hpp"
#include "support/oracles.hpp"

namespace mhd2d {
namespace {

VectorField base_profile(const Grid& g) {
  VectorField f(g);
  f[0] = oracle::sample(g, [](double y1, double y2) { return std::sin(y1) * std::cos(y2); });
  f[1] = oracle::sample(g, [](double y1, double y2) { return -std::cos(y1) * std::sin(y2); });
  return f;
}

// max |det(I + grad eta) - 1| on the grid, from spectral derivatives.
double det_residual(const VectorField& eta) {
  const RealField a = to_physical(derivative(eta[0], 1)), b = to_physical(derivative(eta[0], 2));
  const RealField c = to_physical(derivative(eta[1], 1)), d = to_physical(derivative(eta[1], 2));
  double worst = 0.0;
  for (std::size_t p = 0; p < a.values.size(); ++p)
    worst = std::max(worst, std::fabs((1.0 + a.values[p]) * (1.0 + d.values[p]) -
                                      b.values[p] * c.values[p] - 1.0));
  return worst;
}

bool bit_identical(const VectorField& x, const VectorField& y) {
  for (int c = 0; c < 2; ++c) {
    const auto a = x[c].coeffs(), b = y[c].coeffs();
    if (a.size() != b.size() || std::memcmp(a.data(), b.data(), a.size_bytes()) != 0) return false;
  }
  return true;
}

TEST(CellularData, ZeroAmplitudeGivesBaseVelocity) {
  const Grid g(32);
  const InitialData data = generate_cellular(0.0, g);
  EXPECT_EQ(sobolev_norm(data.eta, 0), 0.0);
  EXPECT_LT(data.u.max_abs_difference(base_profile(g)), 1e-15);
  EXPECT_LT(data.u.max_abs_difference(leray_project(base_profile(g))), 1e-15);
}

TEST(CellularData, ConstraintsHold) {
  const Grid g(64);
  const InitialData data = generate_cellular(0.05, g);
  EXPECT_LT(det_residual(data.eta), 1e-10);
  const GeometryBundle geo = build_geometry(data.eta);
  EXPECT_LT(sobolev_norm(div_A(geo, data.u), 0), 1e-10);
  EXPECT_LT(odevity_residual(data.eta), 1e-12);
  EXPECT_LT(odevity_residual(data.u), 1e-12);
  for (int c = 0; c < 2; ++c) {
    EXPECT_LT(std::abs(data.eta[c].mean()), 1e-15);
    EXPECT_LT(std::abs(data.u[c].mean()), 1e-15);
  }
}

TEST(CellularData, CorrectorIsQuadraticInAmplitude) {
  const Grid g(64);
  auto deviation = [&](double eps) {
    const InitialData data = generate_cellular(eps, g);
    return sobolev_norm(data.eta - eps * base_profile(g), 3);
  };
  const double ratio = deviation(0.04) / deviation(0.02);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(CellularData, FieldPerturbationIsAmplitudeIndependentAtInverseScaling) {
  // eps = 1/m: ||m d2 eta0 - d2 eta_bar||_2 = O(eps)
  const Grid g(64);
  auto deviation = [&](double m) {
    const InitialData data = generate_cellular(1.0 / m, g);
    return sobolev_norm(m * derivative(data.eta, 2) - derivative(base_profile(g), 2), 2);
  };
  const double ratio = deviation(20.0) / deviation(40.0);
  EXPECT_GT(ratio, 1.6);
  EXPECT_LT(ratio, 2.4);
}

TEST(CellularData, RequiresTwoPiPeriod) {
  EXPECT_THROW(generate_cellular(0.05, Grid(32, 1.0)), PreconditionError);
}

TEST(CellularData, LargeAmplitudeFailsToConverge) {
  EXPECT_THROW(generate_cellular(2.0, Grid(32)), ConvergenceError);
}

TEST(RandomSymmetric, DeterministicInSeed) {
  const Grid g(32);
  InitialDataSpec spec;
  spec.family = DataFamily::random_symmetric;
  spec.seed = 99;
  const InitialData a = generate_random_symmetric(spec, g);
  const InitialData b = generate_random_symmetric(spec, g);
  EXPECT_TRUE(bit_identical(a.eta, b.eta));
  EXPECT_TRUE(bit_identical(a.u, b.u));
  spec.seed = 100;
  const InitialData c = generate_random_symmetric(spec, g);
  EXPECT_FALSE(bit_identical(a.eta, c.eta));
}

TEST(RandomSymmetric, ConstraintsHold) {
  const Grid g(64);
  for (std::uint64_t seed : {1, 2, 3}) {
    InitialDataSpec spec;
    spec.family = DataFamily::random_symmetric;
    spec.seed = seed;
    const InitialData data = generate_random_symmetric(spec, g);
    EXPECT_LT(det_residual(data.eta), 1e-10);
    const GeometryBundle geo = build_geometry(data.eta);
    EXPECT_LT(sobolev_norm(div_A(geo, data.u), 0), 1e-10);
    EXPECT_LT(odevity_residual(data.eta), 1e-12);
    EXPECT_LT(odevity_residual(data.u), 1e-12);
  }
}

TEST(RandomSymmetric, ZeroBandIsZeroData) {
  InitialDataSpec spec;
  spec.family = DataFamily::random_symmetric;
  spec.band = 0;
  const InitialData data = generate_random_symmetric(spec, Grid(16));
  EXPECT_EQ(sobolev_norm(data.eta, 0) + sobolev_norm(data.u, 0), 0.0);
}

TEST(RandomSymmetric, BandAboveThirdOfGridRejected) {
  InitialDataSpec spec;
  spec.family = DataFamily::random_symmetric;
  spec.band = 6;
  EXPECT_THROW(generate_random_symmetric(spec, Grid(16)), PreconditionError);
}

TEST(Validate, ZeroData) {
  const Grid g(16);
  const ValidationReport r = validate(VectorField(g), VectorField(g), 10.0);
  EXPECT_EQ(r.det_residual, 0.0);
  EXPECT_EQ(r.div_A_residual, 0.0);
  EXPECT_EQ(r.odevity_residual, 0.0);
  EXPECT_EQ(r.mean_residual, 0.0);
  EXPECT_EQ(r.energy_2_0, 0.0);
  EXPECT_EQ(r.energy_2_1, 0.0);
  EXPECT_TRUE(std::isinf(r.mu));
}

TEST(Validate, StableUnderGridRefinement) {
  const double m = 20.0;
  const InitialData coarse = generate_cellular(1.0 / m, Grid(64));
  const InitialData fine = generate_cellular(1.0 / m, Grid(128));
  const ValidationReport a = validate(coarse.eta, coarse.u, m);
  const ValidationReport b = validate(fine.eta, fine.u, m);
  EXPECT_TRUE(std::isfinite(a.energy_2_0) && std::isfinite(a.energy_2_1));
  EXPECT_LT(std::fabs(a.energy_2_0 - b.energy_2_0), 0.01 * b.energy_2_0);
  EXPECT_LT(std::fabs(a.energy_2_1 - b.energy_2_1), 0.01 * b.energy_2_1);
  EXPECT_GT(a.mu, 0.0);
}

TEST(Validate, LargerDisplacementRaisesEnergy) {
  const Grid g(64);
  const double m = 10.0;
  const InitialData data = generate_cellular(0.03, g);
  const VectorField doubled = enforce_volume_preservation(2.0 * data.eta);
  const VectorField u = enforce_div_A_free(doubled, data.u);
  EXPECT_GT(validate(doubled, u, m).energy_2_0, validate(data.eta, data.u, m).energy_2_0);
}

TEST(Validate, MuFormula) {
  const Grid g(64);
  const double m = 30.0;
  const InitialData data = generate_cellular(1.0 / m, g);
  const ValidationReport r = validate(data.eta, data.u, m);
  const double x = r.energy_2_0 * std::exp(r.energy_2_1);
  EXPECT_NEAR(r.mu, m / std::max(std::pow(x, 0.25), x), 1e-12 * r.mu);
}

}  // namespace
}  // namespace mhd2d
