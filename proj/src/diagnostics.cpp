#include "mhd2d/diagnostics.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "mhd2d/error.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double standard_error = 0.0;
  double r_squared = 0.0;
};

Regression least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("regression: abscissae are all equal");
  Regression r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    ssr += e * e;
  }
  r.standard_error = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  r.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return r;
}

VectorField gradient_components(const VectorField& eta, int which) {
  // which = 0: (d1 eta1, d1 eta2); which = 1: (d2 eta1, d2 eta2)
  return derivative(eta, which + 1);
}

}  // namespace

double energy_functional(const VectorField& eta, const VectorField& u, double m, int n, int i) {
  if (i < 0 || n < i || n > 4) throw PreconditionError("energy_functional: need 0 <= i <= n <= 4");
  const int s = n - i;
  auto d2i = [i](const VectorField& f) { return i == 0 ? f : derivative(f, 2, i); };
  double total = 0.0;
  total += sobolev_norm_sq(d2i(gradient_components(eta, 0)), s);
  total += sobolev_norm_sq(d2i(gradient_components(eta, 1)), s);
  total += sobolev_norm_sq(d2i(u), s);
  total += m * m * sobolev_norm_sq(derivative(eta, 2, i + 1), s);
  return total;
}

double energy_functional(const FlowMapState& state, int n, int i) {
  return energy_functional(state.eta, state.u, state.m, n, i);
}

double mechanical_energy(const FlowMapState& state) {
  return sobolev_norm_sq(state.u, 0) + state.m * state.m * sobolev_norm_sq(derivative(state.eta, 2), 0);
}

double damped_energy(const FlowMapState& state) {
  const double aniso = anisotropic_norm(state.eta, 5);
  return sobolev_norm_sq(state.eta, 4) + sobolev_norm_sq(state.u, 4) +
         state.m * state.m * aniso * aniso;
}

double eulerian_sobolev_norm(const GeometryBundle& geo, const VectorField& f, int s) {
  if (s < 0 || s > 4) throw PreconditionError("eulerian_sobolev_norm: order must be in [0, 4]");
  double total = 0.0;
  for (int c = 0; c < 2; ++c) {
    // x-derivative d1^a1 d2^a2 of component c, reached from (a1 - 1, a2) or,
    // when a1 = 0, from (0, a2 - 1)
    std::map<std::pair<int, int>, SpectralField> level{{{0, 0}, f[c]}};
    total += sobolev_norm_sq(f[c], 0);
    for (int l = 1; l <= s; ++l) {
      std::map<std::pair<int, int>, SpectralField> next;
      std::map<std::pair<int, int>, VectorField> grads;
      for (int a1 = 0; a1 <= l; ++a1) {
        const int a2 = l - a1;
        const std::pair<int, int> parent = a1 > 0 ? std::pair{a1 - 1, a2} : std::pair{0, a2 - 1};
        auto it = grads.find(parent);
        if (it == grads.end()) it = grads.emplace(parent, grad_A(geo, level.at(parent))).first;
        const SpectralField& d = it->second[a1 > 0 ? 0 : 1];
        total += sobolev_norm_sq(d, 0);
        next.emplace(std::pair{a1, a2}, d);
      }
      level = std::move(next);
    }
  }
  return std::sqrt(total);
}

double simpson(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw StructuralError("simpson: size mismatch");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (f[0] + f[1]);
  double total = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = t[i + 1] - t[i], h1 = t[i + 2] - t[i + 1];
    total += (h0 + h1) / 6.0 *
             ((2.0 - h1 / h0) * f[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
              (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) {
    // quadratic through the last three samples, integrated over the last interval
    const std::size_t a = n - 3;
    const double h0 = t[a + 1] - t[a], h1 = t[a + 2] - t[a + 1];
    const double d1 = (f[a + 1] - f[a]) / h0;
    const double d2 = ((f[a + 2] - f[a + 1]) / h1 - d1) / (h0 + h1);
    const double lin = 0.5 * ((h0 + h1) * (h0 + h1) - h0 * h0);
    const double quad = h1 * h1 * h1 / 3.0 + 0.5 * h0 * h1 * h1;
    total += f[a] * h1 + d1 * lin + d2 * quad;
  }
  return total;
}

double energy_identity_residual(std::span<const EnergySample> series) {
  if (series.size() < 3) throw PreconditionError("energy_identity_residual: need at least 3 samples");
  std::vector<double> t, d;
  t.reserve(series.size());
  d.reserve(series.size());
  for (const auto& s : series) {
    t.push_back(s.t);
    d.push_back(s.dissipation);
  }
  const double initial = series.front().energy;
  if (!(initial > 0.0)) throw DomainError("energy_identity_residual: initial energy must be positive");
  return std::abs(series.back().energy + simpson(t, d) - initial) / initial;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> values, DecayKind kind,
                   double t_min, double t_max) {
  if (t.size() != values.size()) throw StructuralError("fit_decay: size mismatch");
  std::vector<double> x, y;
  std::ostringstream offenders;
  int bad = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(values[i] > 0.0)) {
      if (bad < 10) offenders << (bad ? ", " : "") << "t=" << t[i] << " value=" << values[i];
      ++bad;
      continue;
    }
    x.push_back(kind == DecayKind::power ? std::log1p(t[i]) : t[i]);
    y.push_back(std::log(values[i]));
  }
  if (bad > 0) {
    std::ostringstream msg;
    msg << "fit_decay: " << bad << " nonpositive samples in window (" << offenders.str() << ")";
    throw DomainError(msg.str());
  }
  if (x.size() < 8) {
    std::ostringstream msg;
    msg << "fit_decay: window [" << t_min << ", " << t_max << "] holds " << x.size()
        << " samples, need at least 8";
    throw PreconditionError(msg.str());
  }
  const Regression r = least_squares(x, y);
  DecayFit fit;
  fit.kind = kind;
  fit.exponent_or_rate = kind == DecayKind::power ? r.slope : -r.slope;
  fit.standard_error = r.standard_error;
  fit.intercept = r.intercept;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.r_squared = r.r_squared;
  fit.samples = static_cast<int>(x.size());
  return fit;
}

EnergyRecord linear_error_record(const FlowMapState& run, const FlowMapState& linear) {
  require_same_grid(run.grid(), linear.grid(), "linear_error_record");
  if (std::abs(run.t - linear.t) > 1e-9 * std::max(1.0, std::abs(run.t))) {
    std::ostringstream msg;
    msg << "linear_error_record: misaligned times " << run.t << " and " << linear.t;
    throw StructuralError(msg.str());
  }
  const VectorField eta_d = run.eta - linear.eta;
  const VectorField u_d = run.u - linear.u;
  const double m = run.m;
  EnergyRecord rec;
  rec.t = run.t;
  const double um = sobolev_norm_sq(u_d, 2) + m * m * sobolev_norm_sq(derivative(eta_d, 2), 2);
  const double aniso = anisotropic_norm(eta_d, 5);
  rec.norms["eta_d_H3_sq"] = sobolev_norm_sq(eta_d, 3);
  rec.norms["um_d_H2_sq"] = um;
  rec.norms["um_d_H2_sq_weighted"] = (1.0 + run.t) * um;
  rec.norms["damped_error"] =
      sobolev_norm_sq(eta_d, 4) + sobolev_norm_sq(u_d, 4) + m * m * aniso * aniso;
  return rec;
}

std::vector<EnergyRecord> linear_error_metrics(std::span<const FlowMapState> run,
                                               std::span<const FlowMapState> linear) {
  if (run.size() != linear.size())
    throw StructuralError("linear_error_metrics: trajectories have different lengths");
  std::vector<EnergyRecord> out;
  out.reserve(run.size());
  for (std::size_t i = 0; i < run.size(); ++i) out.push_back(linear_error_record(run[i], linear[i]));
  return out;
}

LinearErrorSummary summarize_linear_errors(std::span<const EnergyRecord> records) {
  LinearErrorSummary s;
  std::vector<double> t, um;
  for (const auto& r : records) {
    s.sup_eta_d_H3_sq = std::max(s.sup_eta_d_H3_sq, r.norms.at("eta_d_H3_sq"));
    s.sup_damped_error = std::max(s.sup_damped_error, r.norms.at("damped_error"));
    t.push_back(r.t);
    um.push_back(r.norms.at("um_d_H2_sq"));
  }
  s.integral_um_d_H2_sq = simpson(t, um);
  return s;
}

SweepResult msweep_slope(std::span<const SweepPoint> points) {
  if (points.size() < 3) throw PreconditionError("msweep_slope: need at least 3 points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i].m > points[i - 1].m))
      throw PreconditionError("msweep_slope: m values must be strictly increasing");
    if (!(points[i].value > 0.0)) {
      std::ostringstream msg;
      msg << "msweep_slope: nonpositive value " << points[i].value << " at m = " << points[i].m;
      throw DomainError(msg.str());
    }
    x.push_back(std::log(points[i].m));
    y.push_back(std::log(points[i].value));
  }
  const Regression r = least_squares(x, y);
  return SweepResult{r.slope, r.standard_error, r.intercept, r.r_squared};
}

}  // namespace mhd2d
