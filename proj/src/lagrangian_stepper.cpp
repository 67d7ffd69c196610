#include "mhd2d/lagrangian_stepper.hpp"

#include <cmath>
#include <sstream>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/small_matrix.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

constexpr int kStride = 16;

double max_speed(const VectorField& u) {
  const RealField a = to_physical(u[0]);
  const RealField b = to_physical(u[1]);
  double best = 0.0;
  for (std::size_t p = 0; p < a.values.size(); ++p)
    best = std::max(best, std::hypot(a.values[p], b.values[p]));
  return best;
}

// x_eta <- e00 eta + e01 u,  x_u <- e10 eta + e11 u, mode by mode.
void propagate(const double* coeffs, int offset, const VectorField& eta, const VectorField& u,
               VectorField& out_eta, VectorField& out_u) {
  const std::size_t modes = eta.grid().mode_count();
  for (int c = 0; c < 2; ++c) {
    const Complex* e = eta[c].coeffs().data();
    const Complex* v = u[c].coeffs().data();
    Complex* oe = out_eta[c].coeffs().data();
    Complex* ov = out_u[c].coeffs().data();
    for (std::size_t k = 0; k < modes; ++k) {
      const double* m = coeffs + k * kStride + offset;
      const Complex a = e[k], b = v[k];
      oe[k] = m[0] * a + m[1] * b;
      ov[k] = m[2] * a + m[3] * b;
    }
  }
}

// (eta, u) += s * column * n, column stored at offset as (eta entry, u entry).
void add_column(const double* coeffs, int offset, double s, const VectorField& n,
                VectorField& eta, VectorField& u) {
  const std::size_t modes = n.grid().mode_count();
  for (int c = 0; c < 2; ++c) {
    const Complex* src = n[c].coeffs().data();
    Complex* oe = eta[c].coeffs().data();
    Complex* ov = u[c].coeffs().data();
    for (std::size_t k = 0; k < modes; ++k) {
      const double* m = coeffs + k * kStride + offset;
      oe[k] += s * m[0] * src[k];
      ov[k] += s * m[1] * src[k];
    }
  }
}

}  // namespace

LagrangianStepper::LagrangianStepper(const Grid& grid) : grid_(grid) {}

double LagrangianStepper::stability_bound(const FlowMapState& state) {
  return state.grid().spacing() / std::max(1.0, max_speed(state.u));
}

void LagrangianStepper::prepare(const FlowMapState& s, double dt) {
  if (!coeffs_.data.empty() && coeffs_.dt == dt && coeffs_.nu == s.nu &&
      coeffs_.kappa == s.kappa && coeffs_.m == s.m)
    return;
  coeffs_.dt = dt;
  coeffs_.nu = s.nu;
  coeffs_.kappa = s.kappa;
  coeffs_.m = s.m;
  coeffs_.data.assign(grid_.mode_count() * kStride, 0.0);
  for (int r = 0; r < grid_.n(); ++r) {
    for (int c = 0; c < grid_.columns(); ++c) {
      if (!grid_.retained(r, c)) continue;
      const double k2 = grid_.k2(c);
      const double d = s.nu * grid_.k_squared(r, c) + s.kappa;
      Mat2 m{};
      m[0][1] = 1.0;
      m[1][0] = -s.m * s.m * k2 * k2;
      m[1][1] = -d;
      const PhiFunctions full = phi_functions(m, dt);
      const PhiFunctions half = phi_functions(m, 0.5 * dt);
      double* out = coeffs_.data.data() + grid_.index(r, c) * kStride;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          out[2 * i + j] = full.exp[i][j].real();
          out[4 + 2 * i + j] = half.exp[i][j].real();
        }
      for (int i = 0; i < 2; ++i) {
        const double p1 = full.phi1[i][1].real(), p2 = full.phi2[i][1].real();
        const double p3 = full.phi3[i][1].real();
        out[8 + i] = 0.5 * dt * half.phi1[i][1].real();
        out[10 + i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
        out[12 + i] = dt * (p2 - 2.0 * p3);
        out[14 + i] = dt * (-p2 + 4.0 * p3);
      }
    }
  }
}

VectorField LagrangianStepper::evaluate(const FlowMapState& s, const StepControl& control) {
  const GeometryBundle geo = build_geometry(s.eta);
  const LagrangianKernels kernels(geo);
  PressureSolution p = solve_lagrangian_pressure(kernels, s.u, s.m, control.elliptic,
                                                 pressure_guess_ ? &*pressure_guess_ : nullptr);
  report_.pressure_iterations += p.report.iterations;
  VectorField n = grad_A(geo, p.q);
  n *= -1.0;
  if (s.nu != 0.0) {
    n.axpy(s.nu, kernels.laplacian_A(s.u));
    n.axpy(-s.nu, laplacian(s.u));
  }
  pressure_guess_ = std::move(p.q);
  return n;
}

VectorField LagrangianStepper::nonlinear_term(const FlowMapState& state) {
  return evaluate(state, StepControl{});
}

FlowMapState LagrangianStepper::finish(FlowMapState next, const StepControl& control) {
  const GeometryBundle geo = build_geometry(next.eta);
  const LagrangianKernels kernels(geo);
  EllipticOptions options = control.elliptic;
  options.tolerance = control.projection_tolerance;
  ProjectionResult proj = project_div_A_free(kernels, next.u, options,
                                             projection_guess_ ? &*projection_guess_ : nullptr);
  report_.projection_iterations = proj.report.iterations;
  report_.projection_residual = proj.report.final_residual;
  report_.min_jacobian = geo.min_jacobian;
  report_.max_jacobian = geo.max_jacobian;
  next.u = std::move(proj.u);
  projection_guess_ = std::move(proj.phi);
  if (control.odevity_project) {
    next.eta = odevity_project(next.eta);
    next.u = odevity_project(next.u);
  }
  next.eta.zero_mean();
  next.u.zero_mean();
  return next;
}

FlowMapState LagrangianStepper::step_etd(const FlowMapState& s, const StepControl& control) {
  prepare(s, control.dt);
  const double* co = coeffs_.data.data();
  const VectorField n_x = evaluate(s, control);

  FlowMapState a = s;
  propagate(co, 4, s.eta, s.u, a.eta, a.u);
  FlowMapState e2x = a;  // E_half x, reused by the second stage
  add_column(co, 8, 1.0, n_x, a.eta, a.u);
  const VectorField n_a = evaluate(a, control);

  FlowMapState b = e2x;
  add_column(co, 8, 1.0, n_a, b.eta, b.u);
  const VectorField n_b = evaluate(b, control);

  FlowMapState c = s;
  propagate(co, 4, a.eta, a.u, c.eta, c.u);
  VectorField combo = 2.0 * n_b;
  combo -= n_x;
  add_column(co, 8, 1.0, combo, c.eta, c.u);
  const VectorField n_c = evaluate(c, control);

  FlowMapState next = s;
  propagate(co, 0, s.eta, s.u, next.eta, next.u);
  add_column(co, 10, 1.0, n_x, next.eta, next.u);
  add_column(co, 12, 2.0, n_a + n_b, next.eta, next.u);
  add_column(co, 14, 1.0, n_c, next.eta, next.u);
  next.t = s.t + control.dt;

  previous_ = s;
  previous_nonlinear_ = n_x;
  history_dt_ = control.dt;
  return next;
}

FlowMapState LagrangianStepper::step_bdf2(const FlowMapState& s, const StepControl& control) {
  const double dt = control.dt;
  const bool history = previous_ && previous_nonlinear_ && history_dt_ == dt &&
                       std::abs(previous_->t + dt - s.t) <= 1e-9 * std::max(1.0, s.t) &&
                       previous_->nu == s.nu && previous_->kappa == s.kappa && previous_->m == s.m;
  if (!history) return step_etd(s, control);

  const VectorField n_now = evaluate(s, control);
  const FlowMapState& old = *previous_;
  FlowMapState next = s;
  for (int comp = 0; comp < 2; ++comp) {
    for (int r = 0; r < grid_.n(); ++r) {
      for (int c = 0; c < grid_.columns(); ++c) {
        if (!grid_.retained(r, c)) {
          next.eta[comp](r, c) = 0.0;
          next.u[comp](r, c) = 0.0;
          continue;
        }
        const double k2 = grid_.k2(c);
        const double w = s.m * s.m * k2 * k2;
        const double d = s.nu * grid_.k_squared(r, c) + s.kappa;
        const Complex r_eta = 4.0 * s.eta[comp](r, c) - old.eta[comp](r, c);
        const Complex r_u = 4.0 * s.u[comp](r, c) - old.u[comp](r, c) +
                            2.0 * dt * (2.0 * n_now[comp](r, c) - (*previous_nonlinear_)[comp](r, c));
        const Complex u_new =
            (r_u - 2.0 * dt * w * r_eta / 3.0) / (3.0 + 2.0 * dt * d + 4.0 * dt * dt * w / 3.0);
        next.u[comp](r, c) = u_new;
        next.eta[comp](r, c) = (r_eta + 2.0 * dt * u_new) / 3.0;
      }
    }
  }
  next.t = s.t + dt;
  previous_ = s;
  previous_nonlinear_ = n_now;
  return next;
}

FlowMapState LagrangianStepper::step(const FlowMapState& state, const StepControl& control) {
  require_same_grid(grid_, state.grid(), "LagrangianStepper::step");
  if (!control.dealias) throw PreconditionError("LagrangianStepper: only dealiased stepping is supported");
  if (!(control.dt > 0.0)) throw PreconditionError("LagrangianStepper: dt must be positive");
  const double bound = stability_bound(state);
  if (control.dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "LagrangianStepper: dt = " << control.dt << " exceeds the stability bound " << bound;
    throw StabilityError(msg.str(), control.dt, bound);
  }
  report_ = LagrangianStepReport{};
  FlowMapState next = control.scheme == Scheme::imex_bdf2 ? step_bdf2(state, control)
                                                          : step_etd(state, control);
  return finish(std::move(next), control);
}

FlowMapState step_lagrangian_viscous(const FlowMapState& state, const StepControl& control) {
  if (state.kappa != 0.0) throw PreconditionError("step_lagrangian_viscous: kappa must be zero");
  LagrangianStepper stepper(state.grid());
  return stepper.step(state, control);
}

FlowMapState step_lagrangian_damped(const FlowMapState& state, const StepControl& control) {
  if (state.nu != 0.0) throw PreconditionError("step_lagrangian_damped: nu must be zero");
  LagrangianStepper stepper(state.grid());
  return stepper.step(state, control);
}

}  // namespace mhd2d
