#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "mhd2d/spectral_field.hpp"

namespace mhd2d {

// Full Lagrangian simulation state. zeta = y + eta is the flow map; u is the
// velocity carried by the label y. Exactly one of nu, kappa is positive for
// a physical run.
struct FlowMapState {
  explicit FlowMapState(const Grid& g) : eta(g), u(g) {}
  FlowMapState(VectorField eta_, VectorField u_, double t_, double nu_, double kappa_, double m_)
      : eta(std::move(eta_)), u(std::move(u_)), t(t_), nu(nu_), kappa(kappa_), m(m_) {}

  const Grid& grid() const noexcept { return eta.grid(); }

  VectorField eta;
  VectorField u;
  double t = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
  double m = 1.0;
};

// Index of entry (i, j) in the flattened 2x2 arrays below (0-based).
constexpr int entry(int i, int j) noexcept { return 2 * i + j; }

// Pointwise geometry of the flow map on the physical grid.
//   grad_zeta[entry(i,j)] = d_j zeta_i
//   a                     = (grad zeta)^{-T}, the true inverse-transpose
//   a_tilde               = a - I
//   cofactor              = J a, whose rows are exactly divergence free
struct GeometryBundle {
  explicit GeometryBundle(const Grid& g);

  const Grid& grid() const noexcept { return eta.grid(); }

  VectorField eta;
  std::array<std::vector<double>, 4> grad_zeta;
  std::array<std::vector<double>, 4> a;
  std::array<std::vector<double>, 4> a_tilde;
  std::array<std::vector<double>, 4> cofactor;
  std::vector<double> jacobian;
  double min_jacobian = 1.0;
  double max_jacobian = 1.0;
  int min_row = 0;
  int min_col = 0;
};

// Throws GeometryError when min det(grad zeta) <= min_jacobian.
GeometryBundle build_geometry(const VectorField& eta, double min_jacobian = 0.25);

// Lagrangian differential operators (products dealiased):
//   grad_A f  = (A_1k d_k f, A_2k d_k f)
//   div_A X   = A_lk d_k X_l
//   lap_A     = div_A grad_A (componentwise on vectors)
//   curl_A X  = A_1k d_k X_2 - A_2k d_k X_1
VectorField grad_A(const GeometryBundle& geo, const SpectralField& f);
SpectralField div_A(const GeometryBundle& geo, const VectorField& x);
SpectralField lap_A(const GeometryBundle& geo, const SpectralField& f);
VectorField lap_A(const GeometryBundle& geo, const VectorField& x);
SpectralField curl_A(const GeometryBundle& geo, const VectorField& x);

// Runtime-dispatched form of the operators above, for callers that pick the
// operator from data. Throws StructuralError on a rank mismatch.
enum class LagrangianOp { grad, div, lap, curl };
using AnyField = std::variant<SpectralField, VectorField>;
AnyField lagrangian_op(LagrangianOp kind, const GeometryBundle& geo, const AnyField& f);

// Lagrangian magnetic field m (d2 eta + e2) and its perturbation m d2 eta.
VectorField magnetic_field(const FlowMapState& state);
VectorField magnetic_perturbation(const FlowMapState& state);

// Reflection y2 -> -y2 on scalars, and the vector map
// S f = (f1(y1,-y2), -f2(y1,-y2)) whose fixed points satisfy the odevity
// conditions.
SpectralField reflect_y2(const SpectralField& f);
VectorField odevity_reflect(const VectorField& f);
VectorField odevity_project(const VectorField& f);
double odevity_residual(const VectorField& f);

struct Point {
  double x1;
  double x2;
};

// Value and gradient of a truncated Fourier series at an arbitrary point,
// by direct summation over the stored modes.
struct PointSample {
  double value;
  double d1;
  double d2;
};

class FourierEvaluator {
 public:
  // Modes with |index| > band on either axis are skipped; band < 0 keeps all.
  explicit FourierEvaluator(const Grid& grid, int band = -1);
  // Evaluate each field at p; out must have fields.size() entries.
  void sample(std::span<const SpectralField* const> fields, Point p,
              std::span<PointSample> out) const;
  double value(const SpectralField& f, Point p) const;

 private:
  Grid grid_;
  std::vector<int> rows_;
  int cols_;
  mutable std::vector<Complex> e1_, e2_, s0_, s1_;
};

// Largest |mode index| on either axis among nonzero coefficients.
int spectral_extent(const SpectralField& f);

std::vector<double> evaluate_at(const SpectralField& f, std::span<const Point> points);

// Inverse of zeta = y + eta on the Eulerian grid: labels[p] solves
// zeta(labels[p]) = x_p for every grid point x_p, and displacement holds
// labels - x as a spectral field.
struct FlowMapInverse {
  explicit FlowMapInverse(const Grid& g) : displacement(g) {}
  std::vector<Point> labels;
  VectorField displacement;
  double worst_residual = 0.0;
  int max_iterations_used = 0;
};

FlowMapInverse invert_flow_map(const VectorField& eta, double tolerance = 1e-12,
                               int max_iterations = 50);

// Eulerian field G(x) = g(zeta^{-1}(x)) for g given on the label grid.
SpectralField pull_to_eulerian(const SpectralField& g, const FlowMapInverse& inverse);
VectorField pull_to_eulerian(const VectorField& g, const FlowMapInverse& inverse);

// Label-grid field g(y) = G(zeta(y)) for G given on the Eulerian grid.
SpectralField push_to_labels(const SpectralField& eulerian, const VectorField& eta);

}  // namespace mhd2d
