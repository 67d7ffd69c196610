#include "mhd2d/spectral_ops.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"

namespace mhd2d {
namespace {

Complex ik_power(double k, int order) {
  // (i k)^order without going through std::pow on complex values.
  double mag = 1.0;
  for (int j = 0; j < order; ++j) mag *= k;
  switch (order % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

// sum over multi-indices |alpha| == s of k1^{2 a1} k2^{2 a2}
double seminorm_weight(double k1sq, double k2sq, int s) {
  double w = 0.0;
  double p1 = 1.0;
  for (int a = 0; a <= s; ++a) {
    double p2 = 1.0;
    for (int b = 0; b < s - a; ++b) p2 *= k2sq;
    w += p1 * p2;
    p1 *= k1sq;
  }
  return w;
}

template <class Weight>
double weighted_sum(const SpectralField& f, Weight&& weight) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int r = 0; r < g.n(); ++r) {
    const double k1 = g.k1(r);
    for (int c = 0; c < g.columns(); ++c) {
      const double k2 = g.k2(c);
      total += g.column_weight(c) * std::norm(f(r, c)) * weight(k1 * k1, k2 * k2);
    }
  }
  return total * g.area();
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis, int order) {
  if (axis != 1 && axis != 2) throw StructuralError("derivative: axis must be 1 or 2");
  if (order < 1) throw StructuralError("derivative: order must be positive");
  const Grid& g = f.grid();
  SpectralField out(g);
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.columns(); ++c) {
      if (g.nyquist(r, c)) continue;
      const double k = axis == 1 ? g.k1(r) : g.k2(c);
      out(r, c) = f(r, c) * ik_power(k, order);
    }
  }
  return out;
}

VectorField derivative(const VectorField& f, int axis, int order) {
  return VectorField(derivative(f[0], axis, order), derivative(f[1], axis, order));
}

SpectralField laplacian(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField out(g);
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.columns(); ++c) {
      if (g.nyquist(r, c)) continue;
      out(r, c) = -g.k_squared(r, c) * f(r, c);
    }
  }
  return out;
}

VectorField laplacian(const VectorField& f) { return VectorField(laplacian(f[0]), laplacian(f[1])); }

SpectralField divergence(const VectorField& f) {
  return derivative(f[0], 1) + derivative(f[1], 2);
}

VectorField gradient(const SpectralField& f) {
  return VectorField(derivative(f, 1), derivative(f, 2));
}

SpectralField curl(const VectorField& f) { return derivative(f[1], 1) - derivative(f[0], 2); }

SpectralField dealias_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "dealias_product");
  const Grid& grid = f.grid();
  std::vector<double> a(grid.point_count()), b(grid.point_count());
  to_physical(f, a);
  to_physical(g, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  SpectralField out(grid);
  to_spectral(a, out, Truncation::dealias);
  return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  const Grid& grid = f.grid();
  double total = 0.0;
  for (int r = 0; r < grid.n(); ++r) {
    for (int c = 0; c < grid.columns(); ++c) {
      total += grid.column_weight(c) * std::real(std::conj(f(r, c)) * g(r, c));
    }
  }
  return total * grid.area();
}

double inner_product(const VectorField& f, const VectorField& g) {
  return inner_product(f[0], g[0]) + inner_product(f[1], g[1]);
}

double sobolev_norm_sq(const SpectralField& f, int s) {
  if (s < 0) throw StructuralError("sobolev_norm: order must be nonnegative");
  return weighted_sum(f, [s](double k1sq, double k2sq) {
    double w = 0.0;
    for (int j = 0; j <= s; ++j) w += seminorm_weight(k1sq, k2sq, j);
    return w;
  });
}

double sobolev_norm_sq(const VectorField& f, int s) {
  return sobolev_norm_sq(f[0], s) + sobolev_norm_sq(f[1], s);
}

double sobolev_norm(const SpectralField& f, int s) { return std::sqrt(sobolev_norm_sq(f, s)); }
double sobolev_norm(const VectorField& f, int s) { return std::sqrt(sobolev_norm_sq(f, s)); }

double sobolev_seminorm(const SpectralField& f, int s) {
  if (s < 0) throw StructuralError("sobolev_seminorm: order must be nonnegative");
  return std::sqrt(weighted_sum(f, [s](double k1sq, double k2sq) {
    return seminorm_weight(k1sq, k2sq, s);
  }));
}

double sobolev_seminorm(const VectorField& f, int s) {
  const double a = sobolev_seminorm(f[0], s), b = sobolev_seminorm(f[1], s);
  return std::sqrt(a * a + b * b);
}

double anisotropic_norm(const SpectralField& f, int s) {
  if (s < 1) throw StructuralError("anisotropic_norm: order must be >= 1");
  return std::sqrt(weighted_sum(f, [s](double k1sq, double k2sq) {
    double w = 0.0;
    for (int j = 0; j <= s - 1; ++j) w += seminorm_weight(k1sq, k2sq, j);
    return w + seminorm_weight(k1sq, k2sq, s - 1) * k2sq;
  }));
}

double anisotropic_norm(const VectorField& f, int s) {
  const double a = anisotropic_norm(f[0], s), b = anisotropic_norm(f[1], s);
  return std::sqrt(a * a + b * b);
}

VectorField leray_project(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(u);
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.columns(); ++c) {
      const double ksq = g.k_squared(r, c);
      if (ksq == 0.0) continue;
      const double k1 = g.k1(r), k2 = g.k2(c);
      const Complex kdotu = k1 * u[0](r, c) + k2 * u[1](r, c);
      out[0](r, c) -= k1 * kdotu / ksq;
      out[1](r, c) -= k2 * kdotu / ksq;
    }
  }
  return out;
}

SpectralField invert_laplacian(const SpectralField& f, double mean, double mean_tolerance) {
  const double mean_mag = std::abs(f.mean());
  const double norm = sobolev_norm(f, 0);
  if (mean_mag > 0.0 && !(mean_mag < mean_tolerance * norm)) {
    std::ostringstream msg;
    msg << "invert_laplacian: forcing has nonzero mean |f_0| = " << mean_mag;
    throw SolvabilityError(msg.str(), mean_mag);
  }
  const Grid& g = f.grid();
  SpectralField out(g);
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.columns(); ++c) {
      const double ksq = g.k_squared(r, c);
      if (ksq == 0.0 || g.nyquist(r, c)) continue;
      out(r, c) = -f(r, c) / ksq;
    }
  }
  out.set_mean(mean);
  return out;
}

}  // namespace mhd2d
