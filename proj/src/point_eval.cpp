#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/kinematics.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {

FourierEvaluator::FourierEvaluator(const Grid& grid, int band) : grid_(grid) {
  const int n = grid.n();
  if (band < 0 || band >= n / 2) band = n / 2 - 1;  // Nyquist modes are always zero
  for (int r = 0; r < n; ++r)
    if (std::abs(grid.mode1(r)) <= band) rows_.push_back(r);
  cols_ = band + 1;
  e1_.resize(n);
  e2_.resize(cols_);
  s0_.resize(cols_);
  s1_.resize(cols_);
}

void FourierEvaluator::sample(std::span<const SpectralField* const> fields, Point p,
                              std::span<PointSample> out) const {
  if (out.size() != fields.size()) throw StructuralError("FourierEvaluator: output size mismatch");
  const int stride = grid_.columns();
  for (int r : rows_) e1_[r] = std::polar(1.0, grid_.k1(r) * p.x1);
  for (int c = 0; c < cols_; ++c) e2_[c] = std::polar(1.0, grid_.k2(c) * p.x2);

  for (std::size_t f = 0; f < fields.size(); ++f) {
    const SpectralField& field = *fields[f];
    require_same_grid(grid_, field.grid(), "FourierEvaluator");
    std::fill(s0_.begin(), s0_.end(), Complex{});
    std::fill(s1_.begin(), s1_.end(), Complex{});
    const Complex* coeffs = field.coeffs().data();
    for (int r : rows_) {
      const Complex e = e1_[r];
      const Complex ek = e * Complex(0.0, grid_.k1(r));
      const Complex* row = coeffs + static_cast<std::size_t>(r) * stride;
      for (int c = 0; c < cols_; ++c) {
        s0_[c] += row[c] * e;
        s1_[c] += row[c] * ek;
      }
    }
    double value = 0.0, d1 = 0.0, d2 = 0.0;
    for (int c = 0; c < cols_; ++c) {
      const double w = grid_.column_weight(c);
      const Complex t0 = s0_[c] * e2_[c];
      value += w * t0.real();
      d1 += w * (s1_[c] * e2_[c]).real();
      d2 -= w * grid_.k2(c) * t0.imag();
    }
    out[f] = PointSample{value, d1, d2};
  }
}

double FourierEvaluator::value(const SpectralField& f, Point p) const {
  const SpectralField* fields[] = {&f};
  PointSample s{};
  sample(fields, p, std::span<PointSample>(&s, 1));
  return s.value;
}

int spectral_extent(const SpectralField& f) {
  const Grid& g = f.grid();
  int extent = 0;
  for (int r = 0; r < g.n(); ++r)
    for (int c = 0; c < g.columns(); ++c)
      if (f(r, c) != Complex{}) extent = std::max({extent, std::abs(g.mode1(r)), c});
  return extent;
}

std::vector<double> evaluate_at(const SpectralField& f, std::span<const Point> points) {
  FourierEvaluator ev(f.grid(), spectral_extent(f));
  std::vector<double> out;
  out.reserve(points.size());
  for (const Point& p : points) out.push_back(ev.value(f, p));
  return out;
}

FlowMapInverse invert_flow_map(const VectorField& eta, double tolerance, int max_iterations) {
  const Grid& g = eta.grid();
  const int n = g.n();
  const double h = g.spacing();
  FlowMapInverse inv(g);
  inv.labels.resize(g.point_count());

  const auto e1 = to_physical(eta[0]);
  const auto e2 = to_physical(eta[1]);
  FourierEvaluator ev(g, std::max(spectral_extent(eta[0]), spectral_extent(eta[1])));
  const SpectralField* fields[] = {&eta[0], &eta[1]};
  PointSample s[2];

  std::vector<double> disp1(g.point_count()), disp2(g.point_count());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * n + i2;
      const double x1 = i1 * h, x2 = i2 * h;
      double y1 = x1 - e1.values[p], y2 = x2 - e2.values[p];
      double res = std::numeric_limits<double>::infinity();
      int it = 0;
      for (;; ++it) {
        ev.sample(fields, Point{y1, y2}, s);
        const double r1 = y1 + s[0].value - x1, r2 = y2 + s[1].value - x2;
        res = std::max(std::abs(r1), std::abs(r2));
        if (res < tolerance) break;
        if (it >= max_iterations) {
          std::ostringstream msg;
          msg << "invert_flow_map: Newton did not converge at grid point (" << i1 << ", " << i2
              << "), residual " << res;
          throw ConvergenceError(msg.str(), it, res);
        }
        const double f00 = 1.0 + s[0].d1, f01 = s[0].d2;
        const double f10 = s[1].d1, f11 = 1.0 + s[1].d2;
        const double det = f00 * f11 - f01 * f10;
        y1 -= (f11 * r1 - f01 * r2) / det;
        y2 -= (-f10 * r1 + f00 * r2) / det;
      }
      inv.worst_residual = std::max(inv.worst_residual, res);
      inv.max_iterations_used = std::max(inv.max_iterations_used, it);
      inv.labels[p] = Point{y1, y2};
      disp1[p] = y1 - x1;
      disp2[p] = y2 - x2;
    }
  }
  to_spectral(disp1, inv.displacement[0], Truncation::none);
  to_spectral(disp2, inv.displacement[1], Truncation::none);
  return inv;
}

SpectralField pull_to_eulerian(const SpectralField& g, const FlowMapInverse& inverse) {
  require_same_grid(g.grid(), inverse.displacement.grid(), "pull_to_eulerian");
  const auto values = evaluate_at(g, inverse.labels);
  SpectralField out(g.grid());
  to_spectral(values, out, Truncation::none);
  return out;
}

VectorField pull_to_eulerian(const VectorField& g, const FlowMapInverse& inverse) {
  return VectorField(pull_to_eulerian(g[0], inverse), pull_to_eulerian(g[1], inverse));
}

SpectralField push_to_labels(const SpectralField& eulerian, const VectorField& eta) {
  const Grid& g = eta.grid();
  require_same_grid(g, eulerian.grid(), "push_to_labels");
  const int n = g.n();
  const double h = g.spacing();
  const auto e1 = to_physical(eta[0]);
  const auto e2 = to_physical(eta[1]);
  std::vector<Point> points(g.point_count());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * n + i2;
      points[p] = Point{i1 * h + e1.values[p], i2 * h + e2.values[p]};
    }
  const auto values = evaluate_at(eulerian, points);
  SpectralField out(g);
  to_spectral(values, out, Truncation::none);
  return out;
}

}  // namespace mhd2d
