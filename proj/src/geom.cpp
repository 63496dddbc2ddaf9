#include "torsionlab/geom.hpp"

#include <cmath>
#include <string>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

bool is_zero(Vec2 v) { return !(norm(v) > 0.0) || !std::isfinite(v.x) || !std::isfinite(v.y); }

double turn(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

struct LiftBuilder {
  const Refiner& refiner;
  WindingPath& path;

  void segment(double p0, Vec2 v0, double p1, Vec2 v1, int depth) {
    const double step = turn(v0, v1);
    if (std::abs(step) < kPi / 2.0) {
      path.samples.push_back(v1);
      path.params.push_back(p1);
      path.lift.push_back(path.lift.back() + step);
      return;
    }
    const auto index = static_cast<long>(std::floor(p0));
    if (!refiner) {
      throw RefinementExhausted(
          "turn of at least pi/2 after sample " + std::to_string(index) + " and no refiner",
          {{"index", index}, {"depth", depth}});
    }
    if (depth >= kMaxRefineDepth) {
      throw RefinementExhausted("refinement depth exhausted after sample " +
                                    std::to_string(index),
                                {{"index", index}, {"depth", depth}});
    }
    const double pm = 0.5 * (p0 + p1);
    const Vec2 vm = refiner(pm);
    if (is_zero(vm)) {
      throw ZeroVector("zero vector while refining after sample " + std::to_string(index),
                       {{"index", index}, {"param", pm}});
    }
    segment(p0, v0, pm, vm, depth + 1);
    segment(pm, vm, p1, v1, depth + 1);
  }
};

}  // namespace

WindingPath build_winding_path(std::span<const Vec2> vectors, bool closed,
                               const Refiner& refiner) {
  if (vectors.empty()) throw InvalidArgument("winding path needs at least one vector");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (is_zero(vectors[i])) {
      throw ZeroVector("zero vector at sample " + std::to_string(i), {{"index", i}});
    }
  }
  WindingPath path;
  path.closed = closed;
  path.samples.push_back(vectors[0]);
  path.params.push_back(0.0);
  path.lift.push_back(std::atan2(vectors[0].y, vectors[0].x));

  LiftBuilder builder{refiner, path};
  for (std::size_t i = 0; i + 1 < vectors.size(); ++i) {
    builder.segment(static_cast<double>(i), vectors[i], static_cast<double>(i + 1),
                    vectors[i + 1], 0);
  }
  if (closed) {
    const auto n = static_cast<double>(vectors.size());
    builder.segment(n - 1.0, vectors.back(), n, vectors.front(), 0);
  }
  return path;
}

int winding_number(const WindingPath& path) {
  if (!path.closed) throw NotClosed("winding number needs a closed path");
  const double turns = path.total_angle() / kTwoPi;
  const double rounded = std::round(turns);
  const double residue = std::abs(turns - rounded);
  if (residue >= 0.1) {
    throw NonIntegralWinding("winding residue " + std::to_string(residue),
                             {{"residue", residue}});
  }
  return static_cast<int>(rounded);
}

double tracked_angle_change(const std::function<Vec2(double)>& curve, double t0, double t1,
                            int grid) {
  if (grid < 1) throw InvalidArgument("tracking grid must be positive");
  std::vector<Vec2> samples(static_cast<std::size_t>(grid) + 1);
  const double dt = (t1 - t0) / grid;
  for (int k = 0; k <= grid; ++k) {
    samples[static_cast<std::size_t>(k)] = curve(k == grid ? t1 : t0 + k * dt);
  }
  const Refiner refiner = [&](double p) { return curve(t0 + p * dt); };
  return build_winding_path(samples, false, refiner).total_angle();
}

double circle_rotation_number(const std::function<double(double)>& lift, int n_iter, double x0) {
  if (n_iter < 1) throw InvalidArgument("n_iter must be at least 1");
  for (int k = 0; k < 16; ++k) {
    const double p = x0 + k / 16.0;
    const double gap = lift(p + 1.0) - lift(p) - 1.0;
    if (!(std::abs(gap) <= 1e-9)) {
      throw NotALift("F(x+1) - F(x) - 1 = " + std::to_string(gap) + " at x = " +
                         std::to_string(p),
                     {{"x", p}, {"gap", gap}});
    }
  }
  double x = x0;
  for (int i = 0; i < n_iter; ++i) x = lift(x);
  return (x - x0) / n_iter;
}

Vec2 cover_project(CoverPoint p) {
  const double angle = kTwoPi * p.theta;
  return {-p.y * std::cos(angle), -p.y * std::sin(angle)};
}

CoverPoint cover_lift(Vec2 z, double theta_hint) {
  const double r = norm(z);
  if (!(r > 0.0)) throw OriginNotInCover("the origin has no lift to the cover");
  const double base = std::atan2(z.y, z.x) / kTwoPi;
  return {base + std::round(theta_hint - base), -r};
}

}  // namespace torsionlab
