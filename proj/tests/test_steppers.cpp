#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mhd2d/diagnostics.hpp"
#include "mhd2d/error.hpp"
#include "mhd2d/eulerian_stepper.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/flow_map.hpp"
#include "mhd2d/initial_data.hpp"
#include "mhd2d/lagrangian_stepper.hpp"
#include "mhd2d/linear.hpp"
#include "mhd2d/spectral_ops.hpp"
#include "support/oracles.hpp"

namespace mhd2d {
namespace {

FlowMapState cellular_state(const Grid& g, double eps, double m, double nu, double kappa) {
  const InitialData data = generate_cellular(eps, g);
  return FlowMapState(data.eta, data.u, 0.0, nu, kappa, m);
}

// Admissible data without the reflection symmetry.
FlowMapState asymmetric_state(const Grid& g, std::uint64_t seed, double m, double nu) {
  std::mt19937_64 rng(seed);
  VectorField eta = oracle::random_vector(g, 3, rng);
  eta *= 0.03 / std::max(to_physical(eta[0]).max_abs(), to_physical(eta[1]).max_abs());
  eta = enforce_volume_preservation(eta);
  const VectorField u = enforce_div_A_free(eta, 0.05 * oracle::random_vector(g, 3, rng));
  return FlowMapState(eta, u, 0.0, nu, 0.0, m);
}

FlowMapState advance(FlowMapState s, const StepControl& control, int steps) {
  LagrangianStepper stepper(s.grid());
  for (int i = 0; i < steps; ++i) s = stepper.step(s, control);
  return s;
}

double state_distance(const FlowMapState& a, const FlowMapState& b) {
  return std::sqrt(sobolev_norm_sq(a.eta - b.eta, 1) + sobolev_norm_sq(a.u - b.u, 0));
}

StepControl control_with(double dt) {
  StepControl c;
  c.dt = dt;
  c.elliptic.tolerance = 1e-13;
  return c;
}

TEST(LagrangianStepper, ZeroDataStaysZero) {
  const Grid g(16);
  for (double kappa : {0.0, 1.0}) {
    FlowMapState s(g);
    s.m = 10.0;
    s.nu = kappa == 0.0 ? 0.1 : 0.0;
    s.kappa = kappa;
    const FlowMapState out = advance(s, control_with(0.01), 5);
    EXPECT_EQ(sobolev_norm(out.eta, 0) + sobolev_norm(out.u, 0), 0.0);
    EXPECT_NEAR(out.t, 0.05, 1e-15);
  }
}

TEST(LagrangianStepper, ExplicitTermIsQuadraticInAmplitude) {
  const Grid g(32);
  std::mt19937_64 rng(3);
  // Divergence-free inputs have no linear pressure part.
  const VectorField eta = leray_project(oracle::random_vector(g, 3, rng));
  const VectorField u = leray_project(oracle::random_vector(g, 3, rng));
  LagrangianStepper stepper(g);
  auto size = [&](double eps) {
    const FlowMapState s(eps * eta, eps * u, 0.0, 0.1, 0.0, 5.0);
    return sobolev_norm(stepper.nonlinear_term(s), 0);
  };
  const double ratio = size(2e-3) / size(1e-3);
  EXPECT_GE(ratio, 3.4);
  EXPECT_LE(ratio, 4.6);
}

TEST(LagrangianStepper, DampedEnergyLaw) {
  const Grid g(32);
  FlowMapState s = cellular_state(g, 0.05, 5.0, 0.0, 1.0);
  LagrangianStepper stepper(g);
  const StepControl control = control_with(2e-3);
  std::vector<EnergySample> series;
  auto record = [&] {
    series.push_back({s.t, mechanical_energy(s), 2.0 * s.kappa * sobolev_norm_sq(s.u, 0)});
  };
  record();
  for (int i = 0; i < 250; ++i) {
    s = stepper.step(s, control);
    record();
  }
  EXPECT_LT(energy_identity_residual(series), 1e-4);
  EXPECT_LT(series.back().energy, series.front().energy);
}

TEST(LagrangianStepper, StrongerDampingDissipatesMore) {
  const Grid g(32);
  std::vector<double> energies;
  for (double kappa : {1.0, 2.0, 4.0}) {
    const FlowMapState out = advance(cellular_state(g, 0.05, 5.0, 0.0, kappa), control_with(4e-3), 250);
    energies.push_back(damped_energy(out));
  }
  EXPECT_GT(energies[0], energies[1]);
  EXPECT_GT(energies[1], energies[2]);
}

TEST(LagrangianStepper, CommutesWithReflection) {
  const Grid g(32);
  const FlowMapState s = asymmetric_state(g, 4, 6.0, 0.1);
  ASSERT_GT(odevity_residual(s.u), 1e-3);
  FlowMapState r = s;
  r.eta = odevity_reflect(s.eta);
  r.u = odevity_reflect(s.u);
  const FlowMapState a = advance(s, control_with(5e-3), 4);
  const FlowMapState b = advance(r, control_with(5e-3), 4);
  const double scale = sobolev_norm(a.u, 0);
  EXPECT_LT(b.u.max_abs_difference(odevity_reflect(a.u)), 1e-11 * scale);
  EXPECT_LT(b.eta.max_abs_difference(odevity_reflect(a.eta)), 1e-11 * scale);
}

TEST(LagrangianStepper, PreservesOdevityWithoutProjection) {
  const Grid g(32);
  const FlowMapState out = advance(cellular_state(g, 0.05, 5.0, 0.1, 0.0), control_with(1e-2), 100);
  EXPECT_NEAR(out.t, 1.0, 1e-12);
  EXPECT_LT(odevity_residual(out.eta), 1e-9);
  EXPECT_LT(odevity_residual(out.u), 1e-9);
}

TEST(LagrangianStepper, KeepsConstraints) {
  const Grid g(32);
  StepControl control;
  control.dt = 1e-2;
  const FlowMapState out = advance(asymmetric_state(g, 5, 6.0, 0.1), control, 50);
  const GeometryBundle geo = build_geometry(out.eta);
  const LagrangianKernels kernels(geo);
  EXPECT_LT(sobolev_norm(kernels.weighted_divergence(out.u), 0), 1e-10 * sobolev_norm(out.u, 1));
  for (int c = 0; c < 2; ++c) {
    EXPECT_LT(std::abs(out.eta[c].mean()), 1e-15);
    EXPECT_LT(std::abs(out.u[c].mean()), 1e-15);
  }
}

double observed_order(const FlowMapState& s0, Scheme scheme, double t_end, double dt) {
  auto run = [&](double h) {
    StepControl c = control_with(h);
    c.scheme = scheme;
    return advance(s0, c, static_cast<int>(std::lround(t_end / h)));
  };
  const FlowMapState reference = run(dt / 16.0);
  const double coarse = state_distance(run(dt), reference);
  const double fine = state_distance(run(dt / 2.0), reference);
  return std::log2(coarse / fine);
}

TEST(LagrangianStepper, FourthOrderInTime) {
  const FlowMapState s0 = cellular_state(Grid(32), 0.1, 3.0, 0.05, 0.0);
  EXPECT_GE(observed_order(s0, Scheme::etd_rk4, 0.4, 0.05), 3.5);
}

TEST(LagrangianStepper, SecondOrderImexBdf2) {
  const FlowMapState s0 = cellular_state(Grid(32), 0.1, 3.0, 0.05, 0.0);
  EXPECT_GE(observed_order(s0, Scheme::imex_bdf2, 0.4, 0.02), 1.8);
}

TEST(LagrangianStepper, RejectsUnstableStep) {
  const FlowMapState s = cellular_state(Grid(16), 0.05, 5.0, 0.1, 0.0);
  const double bound = LagrangianStepper::stability_bound(s);
  LagrangianStepper stepper(s.grid());
  try {
    stepper.step(s, control_with(1.5 * bound));
    FAIL() << "expected StabilityError";
  } catch (const StabilityError& e) {
    EXPECT_DOUBLE_EQ(e.limit(), bound);
  }
  EXPECT_NO_THROW(stepper.step(s, control_with(bound)));
}

TEST(LagrangianStepper, RejectsBadControl) {
  const FlowMapState s = cellular_state(Grid(16), 0.05, 5.0, 0.1, 0.0);
  StepControl c = control_with(1e-3);
  c.dealias = false;
  EXPECT_THROW(step_lagrangian_viscous(s, c), PreconditionError);
  EXPECT_THROW(step_lagrangian_viscous(s, control_with(0.0)), PreconditionError);
  EXPECT_THROW(step_lagrangian_damped(s, control_with(1e-3)), PreconditionError);
  FlowMapState d = s;
  d.kappa = 1.0;
  EXPECT_THROW(step_lagrangian_viscous(d, control_with(1e-3)), PreconditionError);
}

EulerianState taylor_green_state(const Grid& g, double nu) {
  EulerianState s(g);
  s.v[0] = oracle::sample(g, [](double x1, double x2) { return std::sin(x1) * std::cos(x2); });
  s.v[1] = oracle::sample(g, [](double x1, double x2) { return -std::cos(x1) * std::sin(x2); });
  s.nu = nu;
  s.m = 0.0;
  return s;
}

TEST(EulerianStepper, ZeroDataStaysZero) {
  const Grid g(16);
  EulerianState s(g);
  s.nu = 0.1;
  s.m = 5.0;
  EulerianStepper stepper(g);
  for (int i = 0; i < 5; ++i) s = stepper.step(s, control_with(0.01));
  EXPECT_EQ(sobolev_norm(s.v, 0) + sobolev_norm(s.b, 0), 0.0);
}

TEST(EulerianStepper, TaylorGreenDecaysExactly) {
  const Grid g(32);
  const double nu = 0.1;
  EulerianState s = taylor_green_state(g, nu);
  const VectorField v0 = s.v;
  EulerianStepper stepper(g);
  for (int i = 0; i < 100; ++i) s = stepper.step(s, control_with(0.01));
  EXPECT_NEAR(s.t, 1.0, 1e-12);
  EXPECT_LT(s.v.max_abs_difference(std::exp(-2.0 * nu) * v0), 1e-8);
  EXPECT_EQ(sobolev_norm(s.b, 0), 0.0);
}

TEST(EulerianStepper, AlfvenWaveIsExact) {
  // v = a cos(k x2) e1, b = -a cos(k x2) e1 with nu = 0 travels without change
  // of shape: both nonlinear terms vanish and m d2 couples v and b exactly.
  const Grid g(32);
  const double m = 2.0, a = 0.3, t_end = 0.5;
  EulerianState s(g);
  s.v[0] = oracle::sample(g, [&](double, double x2) { return a * std::cos(3.0 * x2); });
  s.b[0] = oracle::sample(g, [&](double, double x2) { return -a * std::cos(3.0 * x2); });
  s.m = m;
  EulerianStepper stepper(g);
  for (int i = 0; i < 50; ++i) s = stepper.step(s, control_with(t_end / 50));
  const SpectralField want = oracle::sample(
      g, [&](double, double x2) { return a * std::cos(3.0 * (x2 - m * t_end)); });
  EXPECT_LT(s.v[0].max_abs_difference(want), 1e-12);
  EXPECT_LT(s.b[0].max_abs_difference(-1.0 * want), 1e-12);
}

TEST(EulerianStepper, RejectsCflViolation) {
  const Grid g(16);
  const EulerianState s = taylor_green_state(g, 0.1);
  const double dt = 1.5 * g.spacing();
  EXPECT_GT(EulerianStepper::cfl_number(s, dt), 1.0);
  EXPECT_THROW(step_eulerian(s, control_with(dt)), StabilityError);
  StepControl c = control_with(1e-3);
  c.scheme = Scheme::imex_bdf2;
  EXPECT_THROW(step_eulerian(s, c), PreconditionError);
}

std::vector<EulerianState> steady_timeline(const EulerianState& s, double spacing, int count) {
  std::vector<EulerianState> out;
  for (int i = 0; i < count; ++i) {
    EulerianState e = s;
    e.t = i * spacing;
    out.push_back(e);
  }
  return out;
}

TEST(FlowMapTracker, AtRestKeepsDisplacement) {
  const Grid g(16);
  std::mt19937_64 rng(6);
  VectorField eta0 = oracle::random_vector(g, 2, rng);
  eta0 *= 0.05;
  const auto timeline = steady_timeline(EulerianState(g), 0.1, 5);
  const auto etas = integrate_flow_map(timeline, eta0);
  ASSERT_EQ(etas.size(), 3u);
  for (const auto& e : etas) EXPECT_LT(e.max_abs_difference(eta0), 1e-14);
}

TEST(FlowMapTracker, UniformTranslation) {
  const Grid g(16);
  const double c = 0.2;
  EulerianState s(g);
  s.v[0].set_mean(c);
  const auto timeline = steady_timeline(s, 0.25, 5);
  const auto etas = integrate_flow_map(timeline, VectorField(g));
  ASSERT_EQ(etas.size(), 3u);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const double t = 0.5 * i;
    EXPECT_NEAR(etas[i][0].mean().real(), c * t, 1e-14);
    EXPECT_NEAR(sobolev_norm(etas[i][1], 0), 0.0, 1e-14);
    SpectralField fluct = etas[i][0];
    fluct.set_mean(0.0);
    EXPECT_LT(sobolev_norm(fluct, 0), 1e-13);
  }
}

TEST(FlowMapTracker, RejectsUnevenTimeline) {
  const Grid g(16);
  auto timeline = steady_timeline(EulerianState(g), 0.1, 3);
  timeline[2].t = 0.35;
  EXPECT_THROW(integrate_flow_map(timeline, VectorField(g)), StructuralError);
}

TEST(LinearCore, TimeReversible) {
  for (double d : {0.0, 0.3, 4.0}) {
    for (double omega_sq : {0.5, 4.0, 25.0}) {
      const RealMat2 f = mode_propagator(d, omega_sq, 0.7);
      const RealMat2 b = mode_propagator(d, omega_sq, -0.7);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double prod = f[i][0] * b[0][j] + f[i][1] * b[1][j];
          EXPECT_NEAR(prod, i == j ? 1.0 : 0.0, 1e-12) << "d=" << d << " w2=" << omega_sq;
        }
    }
  }
}

}  // namespace
}  // namespace mhd2d
