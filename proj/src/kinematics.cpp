#include "mhd2d/kinematics.hpp"

#include <cmath>
#include <limits>
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

}  // namespace

GeometryBundle::GeometryBundle(const Grid& g) : eta(g) {
  const std::size_t points = g.point_count();
  for (int k = 0; k < 4; ++k) {
    const double diag = (k == 0 || k == 3) ? 1.0 : 0.0;
    grad_zeta[k].assign(points, diag);
    a[k].assign(points, diag);
    a_tilde[k].assign(points, 0.0);
    cofactor[k].assign(points, diag);
  }
  jacobian.assign(points, 1.0);
}

GeometryBundle build_geometry(const VectorField& eta, double min_jacobian) {
  const Grid& g = eta.grid();
  GeometryBundle geo(g);
  geo.eta = eta;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto d = physical(derivative(eta[i], j + 1));
      auto& target = geo.grad_zeta[entry(i, j)];
      for (std::size_t p = 0; p < d.size(); ++p) target[p] += d[p];
    }
  }

  const std::size_t points = g.point_count();
  double jmin = std::numeric_limits<double>::infinity();
  double jmax = -jmin;
  std::size_t where = 0;
  for (std::size_t p = 0; p < points; ++p) {
    const double f00 = geo.grad_zeta[0][p], f01 = geo.grad_zeta[1][p];
    const double f10 = geo.grad_zeta[2][p], f11 = geo.grad_zeta[3][p];
    const double det = f00 * f11 - f01 * f10;
    geo.jacobian[p] = det;
    if (det < jmin) {
      jmin = det;
      where = p;
    }
    jmax = std::max(jmax, det);
    geo.cofactor[entry(0, 0)][p] = f11;
    geo.cofactor[entry(0, 1)][p] = -f10;
    geo.cofactor[entry(1, 0)][p] = -f01;
    geo.cofactor[entry(1, 1)][p] = f00;
  }
  geo.min_jacobian = jmin;
  geo.max_jacobian = jmax;
  geo.min_row = static_cast<int>(where / g.n());
  geo.min_col = static_cast<int>(where % g.n());
  if (!(jmin > min_jacobian)) {
    std::ostringstream msg;
    msg << "build_geometry: flow map near singular, min det = " << jmin << " at grid point ("
        << geo.min_row << ", " << geo.min_col << ")";
    throw GeometryError(msg.str(), jmin, geo.min_row, geo.min_col);
  }
  for (std::size_t p = 0; p < points; ++p) {
    const double inv = 1.0 / geo.jacobian[p];
    for (int k = 0; k < 4; ++k) {
      geo.a[k][p] = geo.cofactor[k][p] * inv;
      geo.a_tilde[k][p] = geo.a[k][p] - ((k == 0 || k == 3) ? 1.0 : 0.0);
    }
  }
  return geo;
}

VectorField grad_A(const GeometryBundle& geo, const SpectralField& f) {
  require_same_grid(geo.grid(), f.grid(), "grad_A");
  const auto d1 = physical(derivative(f, 1));
  const auto d2 = physical(derivative(f, 2));
  std::vector<double> out0(d1.size()), out1(d1.size());
  for (std::size_t p = 0; p < d1.size(); ++p) {
    out0[p] = geo.a[entry(0, 0)][p] * d1[p] + geo.a[entry(0, 1)][p] * d2[p];
    out1[p] = geo.a[entry(1, 0)][p] * d1[p] + geo.a[entry(1, 1)][p] * d2[p];
  }
  return VectorField(spectral(f.grid(), out0), spectral(f.grid(), out1));
}

SpectralField div_A(const GeometryBundle& geo, const VectorField& x) {
  require_same_grid(geo.grid(), x.grid(), "div_A");
  std::vector<double> acc(x.grid().point_count(), 0.0);
  for (int l = 0; l < 2; ++l) {
    for (int k = 0; k < 2; ++k) {
      const auto d = physical(derivative(x[l], k + 1));
      const auto& coeff = geo.a[entry(l, k)];
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += coeff[p] * d[p];
    }
  }
  return spectral(x.grid(), acc);
}

SpectralField lap_A(const GeometryBundle& geo, const SpectralField& f) {
  return div_A(geo, grad_A(geo, f));
}

VectorField lap_A(const GeometryBundle& geo, const VectorField& x) {
  return VectorField(lap_A(geo, x[0]), lap_A(geo, x[1]));
}

SpectralField curl_A(const GeometryBundle& geo, const VectorField& x) {
  require_same_grid(geo.grid(), x.grid(), "curl_A");
  std::vector<double> acc(x.grid().point_count(), 0.0);
  for (int k = 0; k < 2; ++k) {
    const auto d2k = physical(derivative(x[1], k + 1));
    const auto d1k = physical(derivative(x[0], k + 1));
    const auto& a1 = geo.a[entry(0, k)];
    const auto& a2 = geo.a[entry(1, k)];
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += a1[p] * d2k[p] - a2[p] * d1k[p];
  }
  return spectral(x.grid(), acc);
}

AnyField lagrangian_op(LagrangianOp kind, const GeometryBundle& geo, const AnyField& f) {
  const bool scalar = std::holds_alternative<SpectralField>(f);
  switch (kind) {
    case LagrangianOp::grad:
      if (!scalar) throw StructuralError("lagrangian_op: grad_A needs a scalar field");
      return grad_A(geo, std::get<SpectralField>(f));
    case LagrangianOp::div:
      if (scalar) throw StructuralError("lagrangian_op: div_A needs a vector field");
      return div_A(geo, std::get<VectorField>(f));
    case LagrangianOp::curl:
      if (scalar) throw StructuralError("lagrangian_op: curl_A needs a vector field");
      return curl_A(geo, std::get<VectorField>(f));
    case LagrangianOp::lap:
      if (scalar) return lap_A(geo, std::get<SpectralField>(f));
      return lap_A(geo, std::get<VectorField>(f));
  }
  throw StructuralError("lagrangian_op: unknown operator");
}

VectorField magnetic_perturbation(const FlowMapState& state) {
  VectorField b = derivative(state.eta, 2);
  b *= state.m;
  return b;
}

VectorField magnetic_field(const FlowMapState& state) {
  VectorField b = magnetic_perturbation(state);
  b[1].set_mean(b[1].mean().real() + state.m);
  return b;
}

SpectralField reflect_y2(const SpectralField& f) {
  // coefficient of f(y1, -y2) at (k1, k2) is c(k1, -k2) = conj(c(-k1, k2))
  const Grid& g = f.grid();
  SpectralField out(g);
  for (int r = 0; r < g.n(); ++r) {
    const int rc = g.conjugate_row(r);
    for (int c = 0; c < g.columns(); ++c) out(r, c) = std::conj(f(rc, c));
  }
  return out;
}

VectorField odevity_reflect(const VectorField& f) {
  return VectorField(reflect_y2(f[0]), -reflect_y2(f[1]));
}

VectorField odevity_project(const VectorField& f) {
  VectorField out = f + odevity_reflect(f);
  out *= 0.5;
  return out;
}

double odevity_residual(const VectorField& f) {
  return sobolev_norm(f - odevity_reflect(f), 0);
}

}  // namespace mhd2d
