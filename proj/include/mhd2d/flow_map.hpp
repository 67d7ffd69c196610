#pragma once

#include <span>
#include <vector>

#include "mhd2d/eulerian_stepper.hpp"
#include "mhd2d/kinematics.hpp"

namespace mhd2d {

// Particles started at zeta(y, t0) = y + eta0(y) for every label grid point y
// and carried by an Eulerian velocity timeline.
class FlowMapTracker {
 public:
  FlowMapTracker(const VectorField& eta0, double t0);

  // One RK4 particle step of length 2 * spacing using the velocity at
  // t, t + spacing and t + 2 * spacing.
  void advance(const EulerianState& start, const EulerianState& mid, const EulerianState& end);

  double time() const noexcept { return t_; }
  const std::vector<Point>& positions() const noexcept { return positions_; }
  // eta(y, t) = zeta(y, t) - y as a spectral field on the label grid.
  VectorField displacement() const;

 private:
  std::vector<Point> velocity_at(const EulerianState& s, const std::vector<Point>& where) const;

  Grid grid_;
  double t_;
  std::vector<Point> positions_;
};

// Displacements at timeline[0], timeline[2], timeline[4], ...; the timeline
// must be evenly spaced.
std::vector<VectorField> integrate_flow_map(std::span<const EulerianState> timeline,
                                            const VectorField& eta0);

// ||b(zeta(y), t) - m d2 eta(y, t)||_0 / max(||b||_0, ||m d2 eta||_0).
double frozen_in_residual(const EulerianState& state, const FlowMapTracker& tracker);

}  // namespace mhd2d
