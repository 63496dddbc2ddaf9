#pragma once

#include <functional>
#include <optional>
#include <string>

#include "torsionlab/foliate.hpp"
#include "torsionlab/genfunc.hpp"
#include "torsionlab/geom.hpp"
#include "torsionlab/linalg.hpp"

namespace torsionlab {

using PlanarMap = std::function<Vec2(Vec2)>;

/// Identity isotopy (f_t), t in [0, 1], of the plane or of a plane domain.
struct PlanarIsotopy {
  std::function<Vec2(double, Vec2)> eval;
  std::optional<Vec2> fixed_point_hint;
  std::string provenance;

  Vec2 operator()(double t, Vec2 z) const { return eval(t, z); }
  PlanarMap time_one() const {
    auto e = eval;
    return [e](Vec2 z) { return e(1.0, z); };
  }
};

PlanarIsotopy natural_isotopy(const GenIsotopy& iso);
PlanarIsotopy alternate_isotopy(const GenIsotopy& iso);
/// J: rigid rotation by 2 pi k t about center.
PlanarIsotopy rigid_rotation(Vec2 center, double turns = 1.0);
/// Expressions in t, x, y.
PlanarIsotopy expression_isotopy(const Expr& fx, const Expr& fy);
/// c + R_{2 pi k t}(f_t(z) - c).
PlanarIsotopy compose_rotation(const PlanarIsotopy& iso, Vec2 center, int turns = 1);
/// Same maps, center marked.
PlanarIsotopy with_hint(PlanarIsotopy iso, Vec2 center);

/// Checks f_0 = id at 32 probe points within 1e-9 around `around` (radius
/// up to `spread`). Throws NotIdentityAtZero.
void check_identity_at_zero(const PlanarIsotopy& iso, Vec2 around, double spread = 1.0);

/// Throws CenterNotFixed unless |f_t(c) - c| <= 1e-9 on a 65 point t-grid.
void check_center_fixed(const PlanarIsotopy& iso, Vec2 center);

/// Lift of the time-one map to the cover of the plane punctured at center,
/// the deck translate being pinned by continuity from f_0 = id.
CoverPoint lift_time_one(const PlanarIsotopy& iso, Vec2 center, CoverPoint p, int t_grid = 256);

inline constexpr int kMaxTrajectoryGrid = 1 << 16;

/// Continuous change (radians) of the angle of f_t(z) - center over t in [0, 1].
/// The t-grid starts at t_grid and doubles until the lift is stable.
double trajectory_angle(const PlanarIsotopy& iso, Vec2 center, Vec2 z, int t_grid = 256);

/// Degree of z -> f(z) - z along the circle. Throws FixedPointOnCurve.
int lefschetz_index(const PlanarMap& f, Vec2 center, double radius, int samples = 256);

/// Degree of the lifted displacement along the cover path from (0, -r) to
/// (1, -r). Throws CenterNotFixed, FixedPointOnCurve.
int isotopy_index(const PlanarIsotopy& iso, Vec2 center, double radius, int samples = 256);

/// Degree of t -> f_t(z0) - f_t(z1) over the time loop. Throws NotFixed,
/// TrajectoryCollision.
int linking_number(const PlanarIsotopy& iso, Vec2 z0, Vec2 z1, int t_samples = 256);

enum class Relation { Less, Greater, Equivalent, Incomparable };

const char* to_string(Relation r);

struct IsotopyOrder {
  Relation relation = Relation::Equivalent;
  std::optional<CoverPoint> witness;  // sample with the largest |gap|
  double min_gap = 0.0;               // of p1(f~1) - p1(f~'1) over the grid
  double max_gap = 0.0;
};

/// Pointwise comparison of the first coordinates of the two lifted time-one
/// maps on a grid x grid sample of [0, 1) x (-radius, 0), tolerance 1e-9.
/// The verdict holds on the sampled grid only.
IsotopyOrder compare_isotopies(const PlanarIsotopy& iso, const PlanarIsotopy& other, Vec2 center,
                               double radius, int grid = 16);

struct IndexRelationReport {
  int lefschetz = 0;
  int isotopy = 0;
  int foliation = 0;
  bool foliation_relation = false;  // i(F) = i(I) + 1
  bool lefschetz_relation = false;  // i(f) = i(F) when i(F) != 1
  bool lefschetz_vacuous = false;
  TransverseVerdict transversality = TransverseVerdict::Tangent;
  double min_det = 0.0;
};

/// Computes the three indices at z0 and checks both relations. Local
/// transversality is sampled on trajectories of `transverse` (defaults to
/// `iso`) from 16 points at distance radius / 2.
IndexRelationReport index_relation_check(const PlanarIsotopy& iso, const Foliation& f, Vec2 z0,
                                         double radius, int samples = 256,
                                         const std::optional<PlanarIsotopy>& transverse = {});

}  // namespace torsionlab
