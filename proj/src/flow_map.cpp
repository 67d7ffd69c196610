#include "mhd2d/flow_map.hpp"

#include <cmath>

#include "mhd2d/error.hpp"
#include "mhd2d/fft.hpp"
#include "mhd2d/spectral_ops.hpp"

namespace mhd2d {

FlowMapTracker::FlowMapTracker(const VectorField& eta0, double t0)
    : grid_(eta0.grid()), t_(t0), positions_(eta0.grid().point_count()) {
  const int n = grid_.n();
  const double h = grid_.spacing();
  const RealField e1 = to_physical(eta0[0]);
  const RealField e2 = to_physical(eta0[1]);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * n + i2;
      positions_[p] = Point{i1 * h + e1.values[p], i2 * h + e2.values[p]};
    }
}

std::vector<Point> FlowMapTracker::velocity_at(const EulerianState& s,
                                               const std::vector<Point>& where) const {
  require_same_grid(grid_, s.grid(), "FlowMapTracker");
  const FourierEvaluator ev(grid_, std::max(spectral_extent(s.v[0]), spectral_extent(s.v[1])));
  const SpectralField* fields[] = {&s.v[0], &s.v[1]};
  PointSample out[2];
  std::vector<Point> vel(where.size());
  for (std::size_t p = 0; p < where.size(); ++p) {
    ev.sample(fields, where[p], out);
    vel[p] = Point{out[0].value, out[1].value};
  }
  return vel;
}

void FlowMapTracker::advance(const EulerianState& start, const EulerianState& mid,
                             const EulerianState& end) {
  const double spacing = mid.t - start.t;
  if (!(spacing > 0.0) || std::abs((end.t - mid.t) - spacing) > 1e-9 * spacing)
    throw StructuralError("FlowMapTracker: timeline must be evenly spaced and increasing");
  if (std::abs(start.t - t_) > 1e-9 * std::max(1.0, t_))
    throw StructuralError("FlowMapTracker: timeline does not start at the tracker time");
  const double h = 2.0 * spacing;
  auto shifted = [&](const std::vector<Point>& k, double s) {
    std::vector<Point> out(positions_.size());
    for (std::size_t p = 0; p < out.size(); ++p)
      out[p] = Point{positions_[p].x1 + s * k[p].x1, positions_[p].x2 + s * k[p].x2};
    return out;
  };
  const auto k1 = velocity_at(start, positions_);
  const auto k2 = velocity_at(mid, shifted(k1, 0.5 * h));
  const auto k3 = velocity_at(mid, shifted(k2, 0.5 * h));
  const auto k4 = velocity_at(end, shifted(k3, h));
  for (std::size_t p = 0; p < positions_.size(); ++p) {
    positions_[p].x1 += h / 6.0 * (k1[p].x1 + 2.0 * k2[p].x1 + 2.0 * k3[p].x1 + k4[p].x1);
    positions_[p].x2 += h / 6.0 * (k1[p].x2 + 2.0 * k2[p].x2 + 2.0 * k3[p].x2 + k4[p].x2);
  }
  t_ = end.t;
}

VectorField FlowMapTracker::displacement() const {
  const int n = grid_.n();
  const double h = grid_.spacing();
  std::vector<double> d1(positions_.size()), d2(positions_.size());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const std::size_t p = static_cast<std::size_t>(i1) * n + i2;
      d1[p] = positions_[p].x1 - i1 * h;
      d2[p] = positions_[p].x2 - i2 * h;
    }
  VectorField out(grid_);
  to_spectral(d1, out[0], Truncation::none);
  to_spectral(d2, out[1], Truncation::none);
  return out;
}

std::vector<VectorField> integrate_flow_map(std::span<const EulerianState> timeline,
                                            const VectorField& eta0) {
  std::vector<VectorField> out;
  if (timeline.empty()) return out;
  FlowMapTracker tracker(eta0, timeline[0].t);
  out.push_back(tracker.displacement());
  for (std::size_t i = 0; i + 2 < timeline.size(); i += 2) {
    tracker.advance(timeline[i], timeline[i + 1], timeline[i + 2]);
    out.push_back(tracker.displacement());
  }
  return out;
}

double frozen_in_residual(const EulerianState& state, const FlowMapTracker& tracker) {
  const Grid& g = state.grid();
  const auto& pos = tracker.positions();
  const FourierEvaluator ev(g, std::max(spectral_extent(state.b[0]), spectral_extent(state.b[1])));
  const VectorField lag = state.m * derivative(tracker.displacement(), 2);
  const RealField l1 = to_physical(lag[0]);
  const RealField l2 = to_physical(lag[1]);
  const SpectralField* fields[] = {&state.b[0], &state.b[1]};
  PointSample out[2];
  double sum = 0.0;
  for (std::size_t p = 0; p < pos.size(); ++p) {
    ev.sample(fields, pos[p], out);
    const double e1 = out[0].value - l1.values[p], e2 = out[1].value - l2.values[p];
    sum += e1 * e1 + e2 * e2;
  }
  const double h = g.spacing();
  const double diff = std::sqrt(sum * h * h);
  const double scale = std::max(sobolev_norm(state.b, 0), sobolev_norm(lag, 0));
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace mhd2d
