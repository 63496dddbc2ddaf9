#pragma once

#include <functional>
#include <span>
#include <vector>

#include "torsionlab/linalg.hpp"

namespace torsionlab {

/// Sequence of nonzero planar vectors with a continuous angle lift (radians).
/// For a closed path the first vector is repeated at the end so that
/// `lift.back() - lift.front()` is the total turning.
struct WindingPath {
  std::vector<Vec2> samples;
  std::vector<double> params;  // sample-index parameter of each stored vector
  std::vector<double> lift;
  bool closed = false;

  double total_angle() const { return lift.back() - lift.front(); }
};

/// Produces the vector at a fractional sample-index parameter. For closed
/// paths the parameter N (number of input vectors) denotes the first vector.
using Refiner = std::function<Vec2(double)>;

inline constexpr int kMaxRefineDepth = 40;

/// Builds the lift, bisecting any step that turns by pi/2 or more.
/// Throws ZeroVector or RefinementExhausted.
WindingPath build_winding_path(std::span<const Vec2> vectors, bool closed,
                               const Refiner& refiner = {});

/// Degree of a closed path. Throws NotClosed, NonIntegralWinding.
int winding_number(const WindingPath& path);

/// Continuous angle change (radians) of curve(t) for t from t0 to t1, sampled
/// on `grid` equal steps and refined as needed.
double tracked_angle_change(const std::function<Vec2(double)>& curve, double t0, double t1,
                            int grid = 256);

/// Birkhoff average (F^n(x0) - x0) / n for a lift F of a circle map
/// (period 1). Throws NotALift when F(x+1) != F(x)+1 at the probe points.
double circle_rotation_number(const std::function<double(double)>& lift, int n_iter,
                              double x0 = 0.0);

/// Point of the annular universal cover R x (-inf, 0); theta in turns.
struct CoverPoint {
  double theta = 0.0;
  double y = -1.0;
};

/// (theta, y) -> -y e^{2 pi i theta}.
Vec2 cover_project(CoverPoint p);

/// Lift of z != 0 whose theta is the deck translate nearest to theta_hint.
CoverPoint cover_lift(Vec2 z, double theta_hint = 0.0);

}  // namespace torsionlab
