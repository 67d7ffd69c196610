#include "mhd2d/eulerian_stepper.hpp"

#include <cmath>
#include <sstream>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/small_matrix.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

constexpr int kStride = 24;
enum Slot { kExp = 0, kExpHalf = 4, kQ = 8, kF1 = 12, kF2 = 16, kF3 = 20 };

struct Pair {
  VectorField v;
  VectorField b;
};

// out = M x for the matrix at `slot` of every mode.
void apply(const std::vector<Complex>& coeffs, int slot, const VectorField& v, const VectorField& b,
           VectorField& out_v, VectorField& out_b) {
  const std::size_t modes = v.grid().mode_count();
  for (int c = 0; c < 2; ++c) {
    const Complex* x = v[c].coeffs().data();
    const Complex* y = b[c].coeffs().data();
    Complex* ox = out_v[c].coeffs().data();
    Complex* oy = out_b[c].coeffs().data();
    for (std::size_t k = 0; k < modes; ++k) {
      const Complex* m = coeffs.data() + k * kStride + slot;
      const Complex a = x[k], e = y[k];
      ox[k] = m[0] * a + m[1] * e;
      oy[k] = m[2] * a + m[3] * e;
    }
  }
}

// target += s * M n
void add_apply(const std::vector<Complex>& coeffs, int slot, double s, const Pair& n, Pair& target) {
  Pair tmp{VectorField(n.v.grid()), VectorField(n.v.grid())};
  apply(coeffs, slot, n.v, n.b, tmp.v, tmp.b);
  target.v.axpy(s, tmp.v);
  target.b.axpy(s, tmp.b);
}

double max_speed(const VectorField& v) {
  const RealField a = to_physical(v[0]);
  const RealField b = to_physical(v[1]);
  double best = 0.0;
  for (std::size_t p = 0; p < a.values.size(); ++p)
    best = std::max(best, std::hypot(a.values[p], b.values[p]));
  return best;
}

}  // namespace

EulerianStepper::EulerianStepper(const Grid& grid) : grid_(grid) {}

double EulerianStepper::cfl_number(const EulerianState& state, double dt) {
  return max_speed(state.v) * dt / state.grid().spacing();
}

void EulerianStepper::prepare(const EulerianState& s, double dt) {
  if (!coeffs_.empty() && dt_ == dt && nu_ == s.nu && kappa_ == s.kappa && m_ == s.m) return;
  dt_ = dt;
  nu_ = s.nu;
  kappa_ = s.kappa;
  m_ = s.m;
  coeffs_.assign(grid_.mode_count() * kStride, Complex{});
  for (int r = 0; r < grid_.n(); ++r) {
    for (int c = 0; c < grid_.columns(); ++c) {
      if (!grid_.retained(r, c)) continue;
      const double d = s.nu * grid_.k_squared(r, c) + s.kappa;
      const Complex coupling(0.0, s.m * grid_.k2(c));
      Mat2 m{};
      m[0][0] = -d;
      m[0][1] = coupling;
      m[1][0] = coupling;
      const PhiFunctions full = phi_functions(m, dt);
      const PhiFunctions half = phi_functions(m, 0.5 * dt);
      Complex* out = coeffs_.data() + grid_.index(r, c) * kStride;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const int e = 2 * i + j;
          out[kExp + e] = full.exp[i][j];
          out[kExpHalf + e] = half.exp[i][j];
          out[kQ + e] = 0.5 * dt * half.phi1[i][j];
          out[kF1 + e] = dt * (full.phi1[i][j] - 3.0 * full.phi2[i][j] + 4.0 * full.phi3[i][j]);
          out[kF2 + e] = dt * (full.phi2[i][j] - 2.0 * full.phi3[i][j]);
          out[kF3 + e] = dt * (-full.phi2[i][j] + 4.0 * full.phi3[i][j]);
        }
    }
  }
}

std::pair<VectorField, VectorField> EulerianStepper::nonlinear_term(const EulerianState& s) const {
  const Grid& g = s.grid();
  const std::size_t points = g.point_count();
  auto phys = [&](const SpectralField& f) {
    std::vector<double> out(points);
    to_physical(f, out);
    return out;
  };
  std::vector<double> v[2], b[2], dv[2][2], db[2][2];
  for (int i = 0; i < 2; ++i) {
    v[i] = phys(s.v[i]);
    b[i] = phys(s.b[i]);
    for (int j = 0; j < 2; ++j) {
      dv[i][j] = phys(derivative(s.v[i], j + 1));
      db[i][j] = phys(derivative(s.b[i], j + 1));
    }
  }
  VectorField nv(g), nb(g);
  std::vector<double> acc_v(points), acc_b(points);
  for (int i = 0; i < 2; ++i) {
    for (std::size_t p = 0; p < points; ++p) {
      acc_v[p] = b[0][p] * db[i][0][p] + b[1][p] * db[i][1][p] - v[0][p] * dv[i][0][p] -
                 v[1][p] * dv[i][1][p];
      acc_b[p] = b[0][p] * dv[i][0][p] + b[1][p] * dv[i][1][p] - v[0][p] * db[i][0][p] -
                 v[1][p] * db[i][1][p];
    }
    to_spectral(acc_v, nv[i], Truncation::dealias);
    to_spectral(acc_b, nb[i], Truncation::dealias);
  }
  nv = leray_project(nv);
  nb = leray_project(nb);
  nv.zero_mean();
  nb.zero_mean();
  return {std::move(nv), std::move(nb)};
}

EulerianState EulerianStepper::step(const EulerianState& s, const StepControl& control) {
  require_same_grid(grid_, s.grid(), "EulerianStepper::step");
  if (!control.dealias) throw PreconditionError("EulerianStepper: only dealiased stepping is supported");
  if (!(control.dt > 0.0)) throw PreconditionError("EulerianStepper: dt must be positive");
  if (control.scheme != Scheme::etd_rk4)
    throw PreconditionError("EulerianStepper: only etd_rk4 is implemented");
  const double cfl = cfl_number(s, control.dt);
  if (cfl > 1.0) {
    std::ostringstream msg;
    msg << "EulerianStepper: CFL number max|v| dt / h = " << cfl << " exceeds 1";
    throw StabilityError(msg.str(), cfl, 1.0);
  }
  prepare(s, control.dt);
  const Grid& g = s.grid();
  auto nonlinear = [&](const Pair& x) {
    EulerianState tmp(x.v, x.b, s.t, s.nu, s.kappa, s.m);
    auto [nv, nb] = nonlinear_term(tmp);
    return Pair{std::move(nv), std::move(nb)};
  };
  auto propagate = [&](int slot, const Pair& x) {
    Pair out{VectorField(g), VectorField(g)};
    apply(coeffs_, slot, x.v, x.b, out.v, out.b);
    return out;
  };

  const Pair x{s.v, s.b};
  const Pair n_x = nonlinear(x);
  const Pair e2x = propagate(kExpHalf, x);
  Pair a = e2x;
  add_apply(coeffs_, kQ, 1.0, n_x, a);
  const Pair n_a = nonlinear(a);
  Pair b = e2x;
  add_apply(coeffs_, kQ, 1.0, n_a, b);
  const Pair n_b = nonlinear(b);
  Pair c = propagate(kExpHalf, a);
  Pair combo{2.0 * n_b.v - n_x.v, 2.0 * n_b.b - n_x.b};
  add_apply(coeffs_, kQ, 1.0, combo, c);
  const Pair n_c = nonlinear(c);

  Pair next = propagate(kExp, x);
  add_apply(coeffs_, kF1, 1.0, n_x, next);
  add_apply(coeffs_, kF2, 2.0, Pair{n_a.v + n_b.v, n_a.b + n_b.b}, next);
  add_apply(coeffs_, kF3, 1.0, n_c, next);

  EulerianState out(leray_project(next.v), leray_project(next.b), s.t + control.dt, s.nu, s.kappa,
                    s.m);
  if (control.odevity_project) {
    // b = m d2 eta carries the opposite parity in y2
    out.v = odevity_project(out.v);
    out.b -= odevity_reflect(out.b);
    out.b *= 0.5;
  }
  out.v.zero_mean();
  out.b.zero_mean();
  return out;
}

EulerianState step_eulerian(const EulerianState& state, const StepControl& control) {
  EulerianStepper stepper(state.grid());
  return stepper.step(state, control);
}

}  // namespace mhd2d
