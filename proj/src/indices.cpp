#include "torsionlab/indices.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "torsionlab/errors.hpp"

namespace torsionlab {

PlanarIsotopy natural_isotopy(const GenIsotopy& iso) {
  return {[iso](double t, Vec2 z) { return gf_apply(iso, t, z); }, std::nullopt,
          "generating function " + iso.g.description()};
}

PlanarIsotopy alternate_isotopy(const GenIsotopy& iso) {
  return {[iso](double t, Vec2 z) { return gf_alt_apply(iso, t, z); }, std::nullopt,
          "two-phase isotopy of " + iso.g.description()};
}

PlanarIsotopy rigid_rotation(Vec2 center, double turns) {
  return {[center, turns](double t, Vec2 z) {
            return center + Mat2::rotation(kTwoPi * turns * t) * (z - center);
          },
          center, "rigid rotation"};
}

PlanarIsotopy expression_isotopy(const Expr& fx, const Expr& fy) {
  return {[fx, fy](double t, Vec2 z) {
            return Vec2{eval_value(fx, z.x, z.y, t), eval_value(fy, z.x, z.y, t)};
          },
          std::nullopt, "(" + to_string(fx) + ", " + to_string(fy) + ")"};
}

PlanarIsotopy compose_rotation(const PlanarIsotopy& iso, Vec2 center, int turns) {
  auto e = iso.eval;
  return {[e, center, turns](double t, Vec2 z) {
            return center + Mat2::rotation(kTwoPi * turns * t) * (e(t, z) - center);
          },
          center, "J^" + std::to_string(turns) + " o " + iso.provenance};
}

PlanarIsotopy with_hint(PlanarIsotopy iso, Vec2 center) {
  iso.fixed_point_hint = center;
  return iso;
}

void check_identity_at_zero(const PlanarIsotopy& iso, Vec2 around, double spread) {
  for (int k = 0; k < 32; ++k) {
    const double r = spread * (k + 1) / 32.0;
    const double a = kTwoPi * std::fmod(k * 0.6180339887, 1.0);
    const Vec2 z = around + r * Vec2{std::cos(a), std::sin(a)};
    const Vec2 w = iso(0.0, z);
    if (!(norm(w - z) <= 1e-9)) {
      throw NotIdentityAtZero("f_0 moves a probe point",
                              {{"x", z.x}, {"y", z.y}, {"moved_by", norm(w - z)}});
    }
  }
}

void check_center_fixed(const PlanarIsotopy& iso, Vec2 center) {
  for (int k = 0; k <= 64; ++k) {
    const double t = k / 64.0;
    const double moved = norm(iso(t, center) - center);
    if (!(moved <= 1e-9)) {
      throw CenterNotFixed("isotopy moves the center",
                           {{"t", t}, {"x", center.x}, {"y", center.y}, {"moved_by", moved}});
    }
  }
}

double trajectory_angle(const PlanarIsotopy& iso, Vec2 center, Vec2 z, int t_grid) {
  auto curve = [&](double t) { return iso(t, z) - center; };
  // A step that turns by a whole number of turns is invisible, so the grid
  // is doubled until two consecutive lifts agree.
  double prev = tracked_angle_change(curve, 0.0, 1.0, t_grid);
  for (int grid = 2 * t_grid; grid <= kMaxTrajectoryGrid; grid *= 2) {
    const double next = tracked_angle_change(curve, 0.0, 1.0, grid);
    if (std::abs(next - prev) < 1e-6) return next;
    prev = next;
  }
  throw RefinementExhausted("trajectory angle did not stabilise",
                            {{"x", z.x}, {"y", z.y}, {"max_grid", kMaxTrajectoryGrid}});
}

CoverPoint lift_time_one(const PlanarIsotopy& iso, Vec2 center, CoverPoint p, int t_grid) {
  const Vec2 z = center + cover_project(p);
  const Vec2 w = iso(1.0, z);
  return {p.theta + trajectory_angle(iso, center, z, t_grid) / kTwoPi, -norm(w - center)};
}

int lefschetz_index(const PlanarMap& f, Vec2 center, double radius, int samples) {
  if (samples < 64 || !(radius > 0.0)) {
    throw InvalidArgument("need radius > 0 and samples >= 64",
                          {{"radius", radius}, {"samples", samples}});
  }
  auto displacement = [&](double k) {
    const double a = kTwoPi * k / samples;
    const Vec2 z = center + radius * Vec2{std::cos(a), std::sin(a)};
    return f(z) - z;
  };
  std::vector<Vec2> d(samples);
  for (int k = 0; k < samples; ++k) {
    d[k] = displacement(k);
    if (!(norm(d[k]) >= 1e-10)) {
      throw FixedPointOnCurve("fixed point on the index circle",
                              {{"sample", k}, {"displacement", norm(d[k])}});
    }
  }
  return winding_number(build_winding_path(d, true, displacement));
}

int isotopy_index(const PlanarIsotopy& iso, Vec2 center, double radius, int samples) {
  if (samples < 16 || !(radius > 0.0)) {
    throw InvalidArgument("need radius > 0 and samples >= 16",
                          {{"radius", radius}, {"samples", samples}});
  }
  check_center_fixed(iso, center);
  auto displacement = [&](double k) {
    const CoverPoint p{k / samples, -radius};
    const CoverPoint q = lift_time_one(iso, center, p);
    return Vec2{q.theta - p.theta, q.y - p.y};
  };
  std::vector<Vec2> d(samples);
  for (int k = 0; k < samples; ++k) {
    d[k] = displacement(k);
    if (!(norm(d[k]) >= 1e-10)) {
      throw FixedPointOnCurve("lifted map has a fixed point on the path",
                              {{"sample", k}, {"displacement", norm(d[k])}});
    }
  }
  return winding_number(build_winding_path(d, true, displacement));
}

int linking_number(const PlanarIsotopy& iso, Vec2 z0, Vec2 z1, int t_samples) {
  if (t_samples < 16) throw InvalidArgument("t_samples must be >= 16", {{"t_samples", t_samples}});
  for (const auto& [name, z] : {std::pair{"z0", z0}, std::pair{"z1", z1}}) {
    const double moved = norm(iso(1.0, z) - z);
    if (!(moved <= 1e-9)) {
      throw NotFixed(std::string(name) + " is not fixed by f_1",
                     {{"point", name}, {"x", z.x}, {"y", z.y}, {"moved_by", moved}});
    }
  }
  auto diff = [&](double k) {
    const double t = k / t_samples;
    return iso(t, z0) - iso(t, z1);
  };
  std::vector<Vec2> d(t_samples);
  for (int k = 0; k < t_samples; ++k) {
    d[k] = diff(k);
    if (!(norm(d[k]) >= 1e-10)) {
      throw TrajectoryCollision("trajectories collide", {{"t", double(k) / t_samples}});
    }
  }
  return winding_number(build_winding_path(d, true, diff));
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Less: return "Less";
    case Relation::Greater: return "Greater";
    case Relation::Equivalent: return "Equivalent";
    case Relation::Incomparable: return "Incomparable";
  }
  return "?";
}

IsotopyOrder compare_isotopies(const PlanarIsotopy& iso, const PlanarIsotopy& other, Vec2 center,
                               double radius, int grid) {
  if (grid < 2 || !(radius > 0.0)) {
    throw InvalidArgument("need radius > 0 and grid >= 2", {{"radius", radius}, {"grid", grid}});
  }
  check_center_fixed(iso, center);
  check_center_fixed(other, center);
  constexpr double tol = 1e-9;
  IsotopyOrder out;
  out.min_gap = INFINITY;
  out.max_gap = -INFINITY;
  double widest = -1.0;
  bool le = true, ge = true;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const CoverPoint p{double(i) / grid, -radius * (j + 0.5) / grid};
      const double gap =
          lift_time_one(iso, center, p).theta - lift_time_one(other, center, p).theta;
      out.min_gap = std::min(out.min_gap, gap);
      out.max_gap = std::max(out.max_gap, gap);
      if (gap > tol) le = false;
      if (gap < -tol) ge = false;
      if (std::abs(gap) > widest) {
        widest = std::abs(gap);
        out.witness = p;
      }
    }
  }
  if (le && ge) {
    out.relation = Relation::Equivalent;
  } else if (le) {
    out.relation = Relation::Less;
  } else if (ge) {
    out.relation = Relation::Greater;
  } else {
    out.relation = Relation::Incomparable;
  }
  return out;
}

IndexRelationReport index_relation_check(const PlanarIsotopy& iso, const Foliation& f, Vec2 z0,
                                         double radius, int samples,
                                         const std::optional<PlanarIsotopy>& transverse) {
  IndexRelationReport r;
  r.lefschetz = lefschetz_index(iso.time_one(), z0, radius, samples);
  r.isotopy = isotopy_index(iso, z0, radius, samples);
  r.foliation = classify_singularity(f, z0, radius, samples).foliation_index;
  r.foliation_relation = r.foliation == r.isotopy + 1;
  r.lefschetz_vacuous = r.foliation == 1;
  r.lefschetz_relation = r.lefschetz_vacuous || r.lefschetz == r.foliation;

  const PlanarIsotopy& probe = transverse ? *transverse : iso;
  r.min_det = INFINITY;
  r.transversality = TransverseVerdict::PositivelyTransverse;
  for (int k = 0; k < 16; ++k) {
    const double a = kTwoPi * (k + 0.5) / 16.0;
    const Vec2 z = z0 + 0.5 * radius * Vec2{std::cos(a), std::sin(a)};
    const ParamPath path = sample_path([&](double t) { return probe(t, z); }, 0.0, 1.0, 64);
    const TransversalityReport tr = transversality_report(path, f);
    r.min_det = std::min(r.min_det, tr.min_det);
    if (tr.verdict == TransverseVerdict::Negative ||
        (tr.verdict == TransverseVerdict::Tangent &&
         r.transversality == TransverseVerdict::PositivelyTransverse)) {
      r.transversality = tr.verdict;
    }
  }
  return r;
}

}  // namespace torsionlab
