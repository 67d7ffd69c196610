#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/initial_data.hpp"
#include "mhd2d/kinematics.hpp"
#include "mhd2d/spectral_ops.hpp"
#include "support/oracles.hpp"

namespace mhd2d {
namespace {

using std::numbers::pi;

VectorField small_displacement(const Grid& g, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  VectorField eta = oracle::random_vector(g, 3, rng);
  const double scale = amplitude / std::max(to_physical(eta[0]).max_abs(), to_physical(eta[1]).max_abs());
  eta *= scale;
  return eta;
}

double spectral_norm(const SpectralField& f) { return sobolev_norm(f, 0); }

TEST(Geometry, ZeroDisplacementIsIdentity) {
  const Grid g(16);
  const GeometryBundle geo = build_geometry(VectorField(g));
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    EXPECT_EQ(geo.a[entry(0, 0)][p], 1.0);
    EXPECT_EQ(geo.a[entry(0, 1)][p], 0.0);
    EXPECT_EQ(geo.a[entry(1, 0)][p], 0.0);
    EXPECT_EQ(geo.a[entry(1, 1)][p], 1.0);
    EXPECT_EQ(geo.jacobian[p], 1.0);
    for (int e = 0; e < 4; ++e) EXPECT_EQ(geo.a_tilde[e][p], 0.0);
  }
  EXPECT_EQ(geo.min_jacobian, 1.0);
  EXPECT_EQ(geo.max_jacobian, 1.0);
}

TEST(Geometry, ShearClosedForm) {
  const double period = 3.0, a = 0.2;
  const Grid g(32, period);
  const double k = 2.0 * pi / period;
  VectorField eta(g);
  eta[0] = oracle::sample(g, [&](double, double y2) { return a * std::sin(k * y2); });
  const GeometryBundle geo = build_geometry(eta);
  double err = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * g.n() + i2;
      const double c = k * a * std::cos(k * i2 * g.spacing());
      err = std::max({err, std::fabs(geo.grad_zeta[entry(0, 1)][p] - c),
                      std::fabs(geo.jacobian[p] - 1.0), std::fabs(geo.a[entry(0, 0)][p] - 1.0),
                      std::fabs(geo.a[entry(0, 1)][p]), std::fabs(geo.a[entry(1, 0)][p] + c),
                      std::fabs(geo.a[entry(1, 1)][p] - 1.0)});
    }
  EXPECT_LT(err, 1e-13);
}

TEST(Geometry, InverseTransposeResidual) {
  const Grid g(32);
  const GeometryBundle geo = build_geometry(small_displacement(g, 3, 0.1));
  double err = 0.0;
  for (std::size_t p = 0; p < g.point_count(); ++p)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        // (A^T grad zeta)_ij = A_ki (grad zeta)_kj
        double s = 0.0;
        for (int k = 0; k < 2; ++k) s += geo.a[entry(k, i)][p] * geo.grad_zeta[entry(k, j)][p];
        err = std::max(err, std::fabs(s - (i == j ? 1.0 : 0.0)));
      }
  EXPECT_LT(err, 1e-12);
}

TEST(Geometry, CofactorMatchesExplicitDisplay) {
  const Grid g(32);
  const InitialData data = generate_cellular(0.05, g);
  const GeometryBundle geo = build_geometry(data.eta);
  double err = 0.0;
  for (std::size_t p = 0; p < g.point_count(); ++p) {
    const auto& z = geo.grad_zeta;
    err = std::max({err, std::fabs(geo.a[entry(0, 0)][p] - z[entry(1, 1)][p]),
                    std::fabs(geo.a[entry(0, 1)][p] + z[entry(1, 0)][p]),
                    std::fabs(geo.a[entry(1, 0)][p] + z[entry(0, 1)][p]),
                    std::fabs(geo.a[entry(1, 1)][p] - z[entry(0, 0)][p])});
  }
  EXPECT_LT(err, 1e-10);
}

TEST(Geometry, NearSingularMapIsRejected) {
  const Grid g(16);
  VectorField eta(g);
  // d1 eta1 = 0.9 cos y1 reaches -0.9, so J dips to 0.1
  eta[0] = oracle::sample(g, [](double y1, double) { return 0.9 * std::sin(y1); });
  try {
    build_geometry(eta);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NEAR(e.min_jacobian(), 0.1, 1e-12);
    EXPECT_EQ(e.row(), g.n() / 2);
  }
}

TEST(LagrangianOps, FlatAtZeroDisplacement) {
  const Grid g(32);
  std::mt19937_64 rng(5);
  const SpectralField f = oracle::random_field(g, 5, rng);
  const VectorField x = oracle::random_vector(g, 5, rng);
  const GeometryBundle geo = build_geometry(VectorField(g));
  auto rel = [](const auto& got, const auto& flat) {
    return sobolev_norm(got - flat, 0) / sobolev_norm(flat, 0);
  };
  EXPECT_LT(rel(grad_A(geo, f), gradient(f)), 1e-13);
  EXPECT_LT(rel(div_A(geo, x), divergence(x)), 1e-13);
  EXPECT_LT(rel(lap_A(geo, f), laplacian(f)), 1e-13);
  EXPECT_LT(rel(lap_A(geo, x), laplacian(x)), 1e-13);
  EXPECT_LT(rel(curl_A(geo, x), curl(x)), 1e-13);
}

TEST(LagrangianOps, DispatcherMatchesTypedOperators) {
  const Grid g(32);
  std::mt19937_64 rng(6);
  const SpectralField f = oracle::random_field(g, 4, rng);
  const VectorField x = oracle::random_vector(g, 4, rng);
  const GeometryBundle geo = build_geometry(small_displacement(g, 9, 0.05));
  const AnyField gf = lagrangian_op(LagrangianOp::grad, geo, f);
  EXPECT_EQ(std::get<VectorField>(gf).max_abs_difference(grad_A(geo, f)), 0.0);
  const AnyField df = lagrangian_op(LagrangianOp::div, geo, x);
  EXPECT_EQ(std::get<SpectralField>(df).max_abs_difference(div_A(geo, x)), 0.0);
  const AnyField lf = lagrangian_op(LagrangianOp::lap, geo, x);
  EXPECT_EQ(std::get<VectorField>(lf).max_abs_difference(lap_A(geo, x)), 0.0);
  const AnyField cf = lagrangian_op(LagrangianOp::curl, geo, x);
  EXPECT_EQ(std::get<SpectralField>(cf).max_abs_difference(curl_A(geo, x)), 0.0);
}

TEST(LagrangianOps, RankMismatchIsStructural) {
  const Grid g(16);
  const GeometryBundle geo = build_geometry(VectorField(g));
  EXPECT_THROW(lagrangian_op(LagrangianOp::grad, geo, VectorField(g)), StructuralError);
  EXPECT_THROW(lagrangian_op(LagrangianOp::div, geo, SpectralField(g)), StructuralError);
  EXPECT_THROW(lagrangian_op(LagrangianOp::curl, geo, SpectralField(g)), StructuralError);
}

TEST(LagrangianOps, PiolaIdentityForVolumePreservingData) {
  const Grid g(64);
  const InitialData data = generate_cellular(0.05, g);
  const GeometryBundle geo = build_geometry(data.eta);
  for (int i = 0; i < 2; ++i) {
    RealField c1(g), c2(g);
    c1.values = geo.cofactor[entry(i, 0)];
    c2.values = geo.cofactor[entry(i, 1)];
    const SpectralField r = derivative(to_spectral(c1, Truncation::none), 1) +
                            derivative(to_spectral(c2, Truncation::none), 2);
    EXPECT_LT(spectral_norm(r), 1e-10);
  }
}

TEST(LagrangianOps, PerpendicularGradientIsFlatDivergenceFree) {
  const Grid g(32);
  std::mt19937_64 rng(12);
  const SpectralField psi = oracle::random_field(g, 6, rng);
  const VectorField u(-1.0 * derivative(psi, 2), derivative(psi, 1));
  const GeometryBundle geo = build_geometry(VectorField(g));
  EXPECT_LT(spectral_norm(div_A(geo, u)), 1e-12);
}

TEST(LagrangianOps, MeanZeroPreservation) {
  const Grid g(64);
  const InitialData data = generate_cellular(0.05, g);
  const GeometryBundle geo = build_geometry(data.eta);
  std::mt19937_64 rng(14);
  const VectorField x = oracle::random_vector(g, 4, rng);
  EXPECT_LT(std::abs(div_A(geo, x).mean()), 1e-10);
  EXPECT_LT(std::abs(lap_A(geo, oracle::random_field(g, 4, rng)).mean()), 1e-10);
}

TEST(MagneticField, BackgroundOnly) {
  const Grid g(16);
  FlowMapState s(g);
  s.m = 7.0;
  const VectorField b = magnetic_field(s);
  EXPECT_EQ(std::abs(b[0].mean()), 0.0);
  EXPECT_EQ(b[1].mean(), Complex(7.0));
  EXPECT_LT(sobolev_norm(magnetic_perturbation(s), 0), 1e-300);
}

TEST(MagneticField, ShearedMap) {
  const Grid g(32);
  FlowMapState s(g);
  s.m = 1.0;
  s.eta[0] = oracle::sample(g, [](double, double y2) { return std::sin(y2); });
  const VectorField b = magnetic_field(s);
  const auto expected = oracle::sample(g, [](double, double y2) { return std::cos(y2); });
  EXPECT_LT(b[0].max_abs_difference(expected), 1e-14);
  const RealField b2 = to_physical(b[1]);
  for (double v : b2.values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(MagneticField, IsDivAFree) {
  const Grid g(64);
  const InitialData data = generate_cellular(0.05, g);
  FlowMapState s(data.eta, data.u, 0.0, 0.05, 0.0, 20.0);
  const GeometryBundle geo = build_geometry(s.eta);
  const VectorField b = magnetic_field(s);
  EXPECT_LT(spectral_norm(div_A(geo, b)), 1e-10 * sobolev_norm(b, 1));
}

TEST(Odevity, ClosedFormFieldIsSymmetric) {
  const Grid g(32);
  VectorField f(g);
  f[0] = oracle::sample(g, [](double y1, double y2) { return std::sin(y1) * std::cos(y2); });
  f[1] = oracle::sample(g, [](double y1, double y2) { return -std::cos(y1) * std::sin(y2); });
  EXPECT_LT(odevity_residual(f), 1e-14);
}

TEST(Odevity, PureViolation) {
  const Grid g(32);
  VectorField f(g);
  f[0] = oracle::sample(g, [](double, double y2) { return std::sin(y2); });
  EXPECT_LT(sobolev_norm(odevity_project(f), 0), 1e-15);
  EXPECT_NEAR(odevity_residual(f), 2.0 * pi * std::sqrt(2.0), 1e-12);
}

TEST(Odevity, ProjectionIsIdempotent) {
  const Grid g(32);
  std::mt19937_64 rng(19);
  const VectorField f = oracle::random_vector(g, 6, rng);
  const VectorField p = odevity_project(f);
  EXPECT_LT(odevity_residual(p), 1e-13);
  EXPECT_LT(odevity_project(p).max_abs_difference(p), 1e-15);
  EXPECT_LT(odevity_reflect(odevity_reflect(f)).max_abs_difference(f), 1e-15);
}

TEST(Odevity, ReflectionMatchesPointValues) {
  const Grid g(16);
  std::mt19937_64 rng(20);
  const SpectralField f = oracle::random_field(g, 4, rng);
  const RealField a = to_physical(f), b = to_physical(reflect_y2(f));
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2) EXPECT_NEAR(b(i1, i2), a(i1, (g.n() - i2) % g.n()), 1e-13);
}

TEST(FourierEvaluator, MatchesGridValuesAndAnalyticOffGrid) {
  const Grid g(32);
  const auto f = oracle::sample(g, [](double y1, double y2) { return std::sin(2.0 * y1 - y2); });
  const FourierEvaluator ev(g);
  const SpectralField* fields[] = {&f};
  PointSample out[1];
  for (Point p : {Point{0.3, 1.7}, Point{5.9, 0.01}, Point{-1.0, 8.0}}) {
    ev.sample(fields, p, out);
    const double phase = 2.0 * p.x1 - p.x2;
    EXPECT_NEAR(out[0].value, std::sin(phase), 1e-13);
    EXPECT_NEAR(out[0].d1, 2.0 * std::cos(phase), 1e-13);
    EXPECT_NEAR(out[0].d2, -std::cos(phase), 1e-13);
  }
}

TEST(FlowMapInverse, ZeroDisplacement) {
  const Grid g(16);
  const FlowMapInverse inv = invert_flow_map(VectorField(g));
  EXPECT_LT(sobolev_norm(inv.displacement, 0), 1e-15);
  EXPECT_LT(inv.worst_residual, 1e-14);
}

TEST(FlowMapInverse, ForwardCompositionIsIdentity) {
  const Grid g(32);
  const VectorField eta = small_displacement(g, 23, 0.1);
  const FlowMapInverse inv = invert_flow_map(eta);
  const auto e1 = evaluate_at(eta[0], inv.labels);
  const auto e2 = evaluate_at(eta[1], inv.labels);
  double err = 0.0;
  for (int i1 = 0; i1 < g.n(); ++i1)
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * g.n() + i2;
      const double x1 = i1 * g.spacing(), x2 = i2 * g.spacing();
      err = std::max({err, std::fabs(inv.labels[p].x1 + e1[p] - x1),
                      std::fabs(inv.labels[p].x2 + e2[p] - x2)});
    }
  EXPECT_LT(err, 1e-10);
}

TEST(FlowMapInverse, PullThenPushRoundTrip) {
  const Grid g(64);
  const VectorField eta = small_displacement(g, 29, 0.05);
  std::mt19937_64 rng(30);
  const SpectralField f = oracle::random_field(g, 3, rng);
  const FlowMapInverse inv = invert_flow_map(eta);
  const SpectralField back = push_to_labels(pull_to_eulerian(f, inv), eta);
  EXPECT_LT(back.max_abs_difference(f), 1e-8);
}

TEST(Sarrus, DivergenceOfVolumePreservingDisplacement) {
  const Grid g(64);
  const InitialData data = generate_cellular(0.05, g);
  const VectorField& eta = data.eta;
  const SpectralField rhs = dealias_product(derivative(eta[1], 1), derivative(eta[0], 2)) -
                            dealias_product(derivative(eta[0], 1), derivative(eta[1], 2));
  EXPECT_LT(spectral_norm(divergence(eta) - rhs), 1e-9);
}

}  // namespace
}  // namespace mhd2d
