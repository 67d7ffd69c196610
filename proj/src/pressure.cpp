#include "mhd2d/pressure.hpp"

#include <cmath>
#include <sstream>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

std::vector<double> physical(const SpectralField& f) {
  std::vector<double> out(f.grid().point_count());
  to_physical(f, out);
  return out;
}

SpectralField spectral(const Grid& g, const std::vector<double>& values) {
  SpectralField out(g);
  to_spectral(values, out, Truncation::dealias);
  return out;
}

bool is_zero(const SpectralField& f) {
  for (const Complex& c : f.coeffs())
    if (c != Complex{}) return false;
  return true;
}

double max_a_tilde(const GeometryBundle& geo) {
  double worst = 0.0;
  for (const auto& entry : geo.a_tilde)
    for (double v : entry) worst = std::max(worst, std::abs(v));
  return worst;
}

// Richardson iteration preconditioned by the flat Laplacian.
template <class Operator>
EllipticSolveReport fixed_point(const Operator& op, const SpectralField& rhs, SpectralField& x,
                                double reference, const EllipticOptions& options,
                                const char* what) {
  EllipticSolveReport report;
  if (reference == 0.0) reference = 1.0;
  SpectralField residual = rhs - op(x);
  double rel = sobolev_norm(residual, 0) / reference;
  int growth = 0;
  while (!(rel <= options.tolerance)) {
    if (report.iterations >= options.max_iterations) {
      std::ostringstream msg;
      msg << what << ": no convergence after " << report.iterations
          << " iterations, relative residual " << rel;
      throw ConvergenceError(msg.str(), report.iterations, rel);
    }
    x += invert_laplacian(residual, 0.0, 1.0);
    ++report.iterations;
    residual = rhs - op(x);
    const double next = sobolev_norm(residual, 0) / reference;
    growth = next > rel ? growth + 1 : 0;
    rel = next;
    if (growth >= options.growth_limit || !std::isfinite(rel)) {
      std::ostringstream msg;
      msg << what << ": fixed point diverging, relative residual " << rel << " after "
          << report.iterations << " iterations";
      throw ConvergenceError(msg.str(), report.iterations, rel);
    }
  }
  report.final_residual = rel;
  report.converged = true;
  return report;
}

}  // namespace

LagrangianKernels::LagrangianKernels(const GeometryBundle& geo) : geo_(&geo) {
  const std::size_t points = geo.grid().point_count();
  for (auto& m : metric_) m.resize(points);
  inv_jacobian_.resize(points);
  const auto& cof = geo.cofactor;
  const auto& a = geo.a;
  for (std::size_t p = 0; p < points; ++p) {
    // (J G)_kj = cof_lk A_lj
    metric_[0][p] = cof[entry(0, 0)][p] * a[entry(0, 0)][p] + cof[entry(1, 0)][p] * a[entry(1, 0)][p];
    metric_[1][p] = cof[entry(0, 0)][p] * a[entry(0, 1)][p] + cof[entry(1, 0)][p] * a[entry(1, 1)][p];
    metric_[2][p] = cof[entry(0, 1)][p] * a[entry(0, 1)][p] + cof[entry(1, 1)][p] * a[entry(1, 1)][p];
    inv_jacobian_[p] = 1.0 / geo.jacobian[p];
  }
}

SpectralField LagrangianKernels::weighted_laplacian(const SpectralField& f) const {
  const Grid& g = f.grid();
  const auto d1 = physical(derivative(f, 1));
  const auto d2 = physical(derivative(f, 2));
  std::vector<double> flux1(d1.size()), flux2(d1.size());
  for (std::size_t p = 0; p < d1.size(); ++p) {
    flux1[p] = metric_[0][p] * d1[p] + metric_[1][p] * d2[p];
    flux2[p] = metric_[1][p] * d1[p] + metric_[2][p] * d2[p];
  }
  return derivative(spectral(g, flux1), 1) + derivative(spectral(g, flux2), 2);
}

SpectralField LagrangianKernels::weighted_divergence(const VectorField& x) const {
  const Grid& g = x.grid();
  const auto x1 = physical(x[0]);
  const auto x2 = physical(x[1]);
  const auto& cof = geo_->cofactor;
  std::vector<double> flux1(x1.size()), flux2(x1.size());
  for (std::size_t p = 0; p < x1.size(); ++p) {
    flux1[p] = cof[entry(0, 0)][p] * x1[p] + cof[entry(1, 0)][p] * x2[p];
    flux2[p] = cof[entry(0, 1)][p] * x1[p] + cof[entry(1, 1)][p] * x2[p];
  }
  return derivative(spectral(g, flux1), 1) + derivative(spectral(g, flux2), 2);
}

SpectralField LagrangianKernels::laplacian_A(const SpectralField& f) const {
  auto values = physical(weighted_laplacian(f));
  for (std::size_t p = 0; p < values.size(); ++p) values[p] *= inv_jacobian_[p];
  return spectral(f.grid(), values);
}

VectorField LagrangianKernels::laplacian_A(const VectorField& x) const {
  return VectorField(laplacian_A(x[0]), laplacian_A(x[1]));
}

SpectralField LagrangianKernels::projection_operator(const SpectralField& f) const {
  return weighted_divergence(grad_A(*geo_, f));
}

SpectralField pressure_forcing(const LagrangianKernels& kernels, const VectorField& u, double m) {
  const GeometryBundle& geo = kernels.geometry();
  SpectralField f = kernels.weighted_divergence(derivative(geo.eta, 2, 2));
  f *= m * m;
  const SpectralField a = dealias_product(u[0], derivative(u[1], 2));
  const SpectralField b = dealias_product(u[0], derivative(u[1], 1));
  f.axpy(2.0, derivative(a, 1));
  f.axpy(-2.0, derivative(b, 2));
  return f;
}

PressureSolution solve_lagrangian_pressure(const LagrangianKernels& kernels, const VectorField& u,
                                           double m, const EllipticOptions& options,
                                           const SpectralField* initial_guess) {
  const GeometryBundle& geo = kernels.geometry();
  require_same_grid(geo.grid(), u.grid(), "solve_lagrangian_pressure");
  PressureSolution out{SpectralField(u.grid()), {}};
  out.report.weak_contraction = max_a_tilde(geo) > 0.5;
  if (is_zero(u[0]) && is_zero(u[1]) && is_zero(geo.eta[0]) && is_zero(geo.eta[1])) {
    out.report.converged = true;
    return out;
  }
  const SpectralField rhs = pressure_forcing(kernels, u, m);
  const double reference = sobolev_norm(rhs, 0);
  if (reference == 0.0) {
    out.report.converged = true;
    return out;
  }
  if (initial_guess) {
    out.q = *initial_guess;
    out.q.set_mean(0.0);
  }
  const bool weak = out.report.weak_contraction;
  out.report = fixed_point([&](const SpectralField& x) { return kernels.weighted_laplacian(x); },
                           rhs, out.q, reference, options, "solve_lagrangian_pressure");
  out.report.weak_contraction = weak;
  return out;
}

PressureSolution solve_lagrangian_pressure(const GeometryBundle& geo, const VectorField& u,
                                           double m, const EllipticOptions& options) {
  const LagrangianKernels kernels(geo);
  return solve_lagrangian_pressure(kernels, u, m, options);
}

ProjectionResult project_div_A_free(const LagrangianKernels& kernels, const VectorField& u_star,
                                    const EllipticOptions& options,
                                    const SpectralField* initial_guess) {
  const GeometryBundle& geo = kernels.geometry();
  require_same_grid(geo.grid(), u_star.grid(), "project_div_A_free");
  ProjectionResult out{u_star, SpectralField(u_star.grid()), {}};
  out.report.weak_contraction = max_a_tilde(geo) > 0.5;
  const SpectralField rhs = kernels.weighted_divergence(u_star);
  const double reference = sobolev_norm(u_star, 1);
  if (sobolev_norm(rhs, 0) == 0.0 || reference == 0.0) {
    out.report.converged = true;
    return out;
  }
  if (initial_guess) {
    out.phi = *initial_guess;
    out.phi.set_mean(0.0);
  }
  const bool weak = out.report.weak_contraction;
  out.report = fixed_point([&](const SpectralField& x) { return kernels.projection_operator(x); },
                           rhs, out.phi, reference, options, "project_div_A_free");
  out.report.weak_contraction = weak;
  out.u -= grad_A(geo, out.phi);
  return out;
}

ProjectionResult project_div_A_free(const GeometryBundle& geo, const VectorField& u_star,
                                    const EllipticOptions& options) {
  const LagrangianKernels kernels(geo);
  return project_div_A_free(kernels, u_star, options);
}

}  // namespace mhd2d
