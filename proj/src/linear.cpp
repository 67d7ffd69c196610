#include "mhd2d/linear.hpp"

#include <cmath>
#include <sstream>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {
namespace {

// C(z) = cosh(sqrt z), S(z) = sinh(sqrt z) / sqrt z by series, |z| <= 1.
void cs_series(double z, double& c, double& s) {
  double term_c = 1.0, term_s = 1.0;
  c = 1.0;
  s = 1.0;
  for (int j = 1; j < 20; ++j) {
    term_c *= z / ((2.0 * j - 1.0) * (2.0 * j));
    term_s *= z / ((2.0 * j) * (2.0 * j + 1.0));
    c += term_c;
    s += term_s;
  }
}

void require_divergence_free(const VectorField& f, const char* name) {
  const double div = sobolev_norm(divergence(f), 0);
  const double scale = sobolev_norm(f, 1);
  if (div > 1e-9 * scale + 1e-14) {
    std::ostringstream msg;
    msg << "evolve_linear_field: " << name << " is not divergence free (||div|| = " << div
        << "); adjust the data with compute_correctors first";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

RealMat2 mode_propagator(double d, double omega_sq, double t) {
  // exp(tM) = c I + s N with N = M + (d/2) I, N^2 = sigma2 I
  const double half = 0.5 * d;
  const double sigma2 = half * half - omega_sq;
  const double z = sigma2 * t * t;
  double c = 0.0, s = 0.0;
  if (std::abs(z) <= 1.0) {
    double cz = 0.0, sz = 0.0;
    cs_series(z, cz, sz);
    const double decay = std::exp(-half * t);
    c = decay * cz;
    s = decay * t * sz;
  } else if (z < 0.0) {
    const double w = std::sqrt(-sigma2);
    const double decay = std::exp(-half * t);
    c = decay * std::cos(w * t);
    s = decay * std::sin(w * t) / w;
  } else {
    // overdamped: eigenvalues -omega_sq/(d/2 + sigma) and -(d/2 + sigma)
    const double sigma = std::sqrt(sigma2);
    const double slow = std::exp(-omega_sq / (half + sigma) * t);
    const double fast = std::exp(-(half + sigma) * t);
    c = 0.5 * (slow + fast);
    s = 0.5 * (slow - fast) / sigma;
  }
  RealMat2 e{};
  e[0][0] = c + s * half;
  e[0][1] = s;
  e[1][0] = -s * omega_sq;
  e[1][1] = c - s * half;
  return e;
}

LinearModeState evolve_mode_exact(const LinearModeState& mode, double t) {
  if (t < 0.0) throw PreconditionError("evolve_mode_exact: negative duration");
  const double ksq = mode.k1 * mode.k1 + mode.k2 * mode.k2;
  const double d = mode.params.damping(ksq);
  const double omega_sq = mode.params.m * mode.params.m * mode.k2 * mode.k2;
  const RealMat2 e = mode_propagator(d, omega_sq, t);
  LinearModeState out = mode;
  for (int c = 0; c < 2; ++c) {
    out.eta_hat[c] = e[0][0] * mode.eta_hat[c] + e[0][1] * mode.u_hat[c];
    out.u_hat[c] = e[1][0] * mode.eta_hat[c] + e[1][1] * mode.u_hat[c];
  }
  return out;
}

LinearFields evolve_linear_field(const VectorField& eta0, const VectorField& u0,
                                 const LinearParams& params, double t) {
  require_same_grid(eta0.grid(), u0.grid(), "evolve_linear_field");
  if (t < 0.0) throw PreconditionError("evolve_linear_field: negative duration");
  require_divergence_free(eta0, "eta0");
  require_divergence_free(u0, "u0");
  const Grid& g = eta0.grid();
  LinearFields out{eta0, u0};
  const double m2 = params.m * params.m;
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < g.columns(); ++c) {
      const double k2 = g.k2(c);
      const RealMat2 e = mode_propagator(params.damping(g.k_squared(r, c)), m2 * k2 * k2, t);
      for (int i = 0; i < 2; ++i) {
        const Complex a = eta0[i](r, c), b = u0[i](r, c);
        out.eta[i](r, c) = e[0][0] * a + e[0][1] * b;
        out.u[i](r, c) = e[1][0] * a + e[1][1] * b;
      }
    }
  }
  return out;
}

SpectralField perturbed_divergence(const GeometryBundle& geo, const VectorField& x) {
  const Grid& g = x.grid();
  require_same_grid(geo.grid(), g, "perturbed_divergence");
  std::vector<double> x1(g.point_count()), x2(g.point_count());
  to_physical(x[0], x1);
  to_physical(x[1], x2);
  const auto& at = geo.a_tilde;
  std::vector<double> flux1(x1.size()), flux2(x1.size());
  for (std::size_t p = 0; p < x1.size(); ++p) {
    flux1[p] = at[entry(0, 0)][p] * x1[p] + at[entry(1, 0)][p] * x2[p];
    flux2[p] = at[entry(0, 1)][p] * x1[p] + at[entry(1, 1)][p] * x2[p];
  }
  SpectralField f1(g), f2(g);
  to_spectral(flux1, f1);
  to_spectral(flux2, f2);
  return derivative(f1, 1) + derivative(f2, 2);
}

Correctors compute_correctors(const VectorField& eta0, const VectorField& u0,
                              const GeometryBundle& geometry0) {
  require_same_grid(eta0.grid(), u0.grid(), "compute_correctors");
  require_same_grid(eta0.grid(), geometry0.grid(), "compute_correctors");
  const SpectralField div_eta = -divergence(eta0);
  const SpectralField div_u = perturbed_divergence(geometry0, u0);
  for (const SpectralField* f : {&div_eta, &div_u}) {
    const double mean = std::abs(f->mean());
    if (mean > 1e-12) {
      std::ostringstream msg;
      msg << "compute_correctors: prescribed divergence has mean " << mean;
      throw SolvabilityError(msg.str(), mean);
    }
  }
  // -Lap grad(psi) + grad(Q) = 0 gives Q = Lap psi = prescribed divergence.
  SpectralField psi1 = invert_laplacian(div_eta, 0.0, 1.0);
  SpectralField psi2 = invert_laplacian(div_u, 0.0, 1.0);
  return Correctors{gradient(psi1), gradient(psi2), div_eta, div_u};
}

}  // namespace mhd2d
