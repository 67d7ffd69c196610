#include "mhd2d/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mhd2d/diagnostics.hpp"
#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/pressure.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

constexpr int kMaxIterations = 200;

VectorField cellular_profile(const Grid& grid) {
  if (std::abs(grid.period() - 2.0 * std::numbers::pi) > 1e-12)
    throw PreconditionError("generate_cellular: the data family needs period 2*pi");
  RealField a(grid), b(grid);
  const double h = grid.spacing();
  for (int i1 = 0; i1 < grid.n(); ++i1)
    for (int i2 = 0; i2 < grid.n(); ++i2) {
      const double y1 = i1 * h, y2 = i2 * h;
      a(i1, i2) = std::sin(y1) * std::cos(y2);
      b(i1, i2) = -std::cos(y1) * std::sin(y2);
    }
  return VectorField(to_spectral(a), to_spectral(b));
}

// d1 eta2 d2 eta1 - d1 eta1 d2 eta2
SpectralField sarrus_term(const VectorField& eta) {
  SpectralField s = dealias_product(derivative(eta[1], 1), derivative(eta[0], 2));
  s -= dealias_product(derivative(eta[0], 1), derivative(eta[1], 2));
  s.set_mean(0.0);
  return s;
}

double relative_change(const VectorField& next, const VectorField& prev) {
  const double scale = sobolev_norm(next, 3);
  if (scale == 0.0) return 0.0;
  return sobolev_norm(next - prev, 3) / scale;
}

VectorField random_profile(std::mt19937_64& rng, const Grid& grid, int band) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorField f(grid);
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < grid.n(); ++r) {
      for (int col = 0; col < grid.columns(); ++col) {
        const int m1 = grid.mode1(r), m2 = grid.mode2(col);
        const double re = normal(rng), im = normal(rng);
        if (std::abs(m1) > band || m2 > band || (m1 == 0 && m2 == 0)) continue;
        f[c](r, col) = Complex(re, im);
      }
    }
    // a physical round trip restores Hermitian symmetry in column 0
    f[c] = to_spectral(to_physical(f[c]));
  }
  return f;
}

}  // namespace

VectorField enforce_volume_preservation(const VectorField& base, int* iterations) {
  VectorField eta = base;
  double last_ratio = 0.0, last_change = 0.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    VectorField next = base + gradient(invert_laplacian(sarrus_term(eta), 0.0, 1.0));
    const double change = relative_change(next, eta);
    eta = std::move(next);
    if (iterations) *iterations = it;
    if (change <= 1e-15) return eta;
    if (it > 1) {
      last_ratio = change / last_change;
      if (it > 4 && last_ratio >= 1.0 && change > 1e-13) {
        std::ostringstream msg;
        msg << "enforce_volume_preservation: amplitude too large, contraction ratio "
            << last_ratio;
        throw ConvergenceError(msg.str(), it, change);
      }
      if (last_ratio >= 0.9 && change < 1e-13) return eta;  // stagnated at roundoff
    }
    last_change = change;
  }
  std::ostringstream msg;
  msg << "enforce_volume_preservation: no convergence, contraction ratio " << last_ratio;
  throw ConvergenceError(msg.str(), kMaxIterations, last_change);
}

VectorField enforce_div_A_free(const VectorField& eta, const VectorField& u, int* iterations) {
  const GeometryBundle geo = build_geometry(eta);
  const LagrangianKernels kernels(geo);
  VectorField out = u;
  const double scale = sobolev_norm(u, 1);
  if (iterations) *iterations = 0;
  if (scale == 0.0) return out;
  double last = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const SpectralField res = kernels.weighted_divergence(out);
    const double rel = sobolev_norm(res, 0) / scale;
    if (rel <= 1e-14) return out;
    growth = rel >= last ? growth + 1 : 0;
    if (growth >= 3) {
      if (rel < 1e-12) return out;  // roundoff floor
      throw ConvergenceError("enforce_div_A_free: fixed point not contracting", it, rel);
    }
    last = rel;
    out -= gradient(invert_laplacian(res, 0.0, 1.0));
    if (iterations) *iterations = it;
  }
  throw ConvergenceError("enforce_div_A_free: iteration cap reached", kMaxIterations, last);
}

InitialData generate_cellular(double epsilon, const Grid& grid) {
  const VectorField profile = cellular_profile(grid);
  InitialData out{VectorField(grid), VectorField(grid)};
  out.eta = enforce_volume_preservation(epsilon * profile, &out.constraint_iterations);
  out.u = enforce_div_A_free(out.eta, profile, &out.velocity_iterations);
  out.eta = odevity_project(out.eta);
  out.u = odevity_project(out.u);
  out.eta.zero_mean();
  out.u.zero_mean();
  return out;
}

InitialData generate_random_symmetric(const InitialDataSpec& spec, const Grid& grid) {
  if (spec.band < 0 || spec.band > grid.n() / 3) {
    std::ostringstream msg;
    msg << "generate_random_symmetric: band " << spec.band << " outside [0, " << grid.n() / 3 << "]";
    throw PreconditionError(msg.str());
  }
  InitialData out{VectorField(grid), VectorField(grid)};
  if (spec.band == 0) return out;
  std::mt19937_64 rng(spec.seed);
  // same L2 size as the cellular profile, pi * sqrt(2) on the 2*pi torus
  const double target = std::numbers::pi * std::sqrt(2.0) * grid.period() / (2.0 * std::numbers::pi);
  auto shape = [&](VectorField f, double size) {
    f = odevity_project(leray_project(f));
    f.zero_mean();
    const double norm = sobolev_norm(f, 0);
    if (norm > 0.0) f *= size / norm;
    return f;
  };
  const VectorField eta_bar = shape(random_profile(rng, grid, spec.band), target);
  const VectorField u_bar = shape(random_profile(rng, grid, spec.band), spec.velocity_scale * target);
  out.eta = enforce_volume_preservation(spec.epsilon * eta_bar, &out.constraint_iterations);
  out.u = enforce_div_A_free(out.eta, u_bar, &out.velocity_iterations);
  out.eta = odevity_project(out.eta);
  out.u = odevity_project(out.u);
  out.eta.zero_mean();
  out.u.zero_mean();
  return out;
}

ValidationReport validate(const VectorField& eta0, const VectorField& u0, double m) {
  require_same_grid(eta0.grid(), u0.grid(), "validate");
  ValidationReport r;
  const GeometryBundle geo = build_geometry(eta0, -std::numeric_limits<double>::infinity());
  for (double j : geo.jacobian) r.det_residual = std::max(r.det_residual, std::abs(j - 1.0));
  if (geo.min_jacobian > 0.0) r.div_A_residual = sobolev_norm(div_A(geo, u0), 0);
  r.odevity_residual = std::max(odevity_residual(eta0), odevity_residual(u0));
  for (const VectorField* f : {&eta0, &u0})
    for (int c = 0; c < 2; ++c) r.mean_residual = std::max(r.mean_residual, std::abs((*f)[c].mean()));
  r.energy_2_0 = energy_functional(eta0, u0, m, 2, 0);
  r.energy_2_1 = energy_functional(eta0, u0, m, 2, 1);
  const VectorField b = m * derivative(eta0, 2);
  r.norm3 = std::sqrt(sobolev_norm_sq(eta0, 3) + sobolev_norm_sq(u0, 3) + sobolev_norm_sq(b, 3));
  r.norm4 = std::sqrt(sobolev_norm_sq(eta0, 4) + sobolev_norm_sq(u0, 4) + sobolev_norm_sq(b, 4));
  const double e = r.energy_2_0 * std::exp(r.energy_2_1);
  r.mu = e > 0.0 ? m / std::max(std::pow(e, 0.25), e) : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace mhd2d
