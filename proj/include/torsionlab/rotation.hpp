#pragma once

#include <functional>
#include <vector>

#include "torsionlab/indices.hpp"
#include "torsionlab/linalg.hpp"

namespace torsionlab {

using MatrixPath = std::function<Mat2(double)>;

/// Rotation number in [0, 1) of v -> Av/|Av| on the unit circle, det A > 0.
/// Throws NotOrientationPreserving.
double linear_blowup_rotation(const Mat2& a);

/// Same class computed by iterating the circle map (tests use it as a check).
double iterated_linear_rotation(const Mat2& a, int n_iter = 4000);

/// Real rotation number of the projectivized path end point; the lift is the
/// one obtained by following Dpath(t) e1 from t = 0. Throws
/// RefinementExhausted.
double isotopy_blowup_rotation(const MatrixPath& dpath, int grid = 256);

/// Central-difference Jacobian of f_t at z along t.
MatrixPath jacobian_path(const PlanarIsotopy& iso, Vec2 z, double h = 1e-6);

struct RotationSample {
  int level = 0;
  int n = 0;
  double rho = 0.0;  // turns per iterate
  Vec2 start;
  int seed = 0;
};

/// Orbit samples of E(U, V, n) seeded deterministically in the annulus
/// V < |z - center| < U. Seeds are processed in parallel (at most
/// TORSIONLAB_THREADS workers) and returned in seed order.
std::vector<RotationSample> rotation_samples(const PlanarIsotopy& iso, Vec2 center,
                                             double u_radius, double v_radius, int n,
                                             int seeds = 32);

struct RotationSetEstimate {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_neg_infinite = false;
  bool hi_pos_infinite = false;
  double u_radius = 0.0;
  double v_radius = 0.0;
  int level = 0;
  int n_min_used = 0;
  std::vector<RotationSample> samples;  // from the level and n range used
  int total_samples = 0;
};

/// Level k uses U = r0 / 2^k, V = r0 / 2^(k+2) and n = 1, 2, 4, ..., n_max.
/// The interval is taken over the deepest level with samples of n >= n_max/4.
/// Throws NoSamples.
RotationSetEstimate local_rotation_set_estimate(const PlanarIsotopy& iso, Vec2 center, double r0,
                                                int levels, int n_max,
                                                double divergence_threshold, int seeds = 32);

enum class TorsionClass { TorsionLow, NotTorsionLow, Inconclusive };
enum class EigenCase { ComplexEigen, NegativeRealPair, PositiveSaddle, Other };

const char* to_string(TorsionClass c);
const char* to_string(EigenCase c);

struct TorsionVerdict {
  TorsionClass classification = TorsionClass::Inconclusive;
  double rho = 0.0;
  bool degenerate = false;
  EigenCase case_tag = EigenCase::Other;
};

EigenCase eigen_case(const Mat2& a);

/// Throws NotOrientationPreserving.
TorsionVerdict torsion_low_classify(const MatrixPath& dpath, int grid = 256);

/// Lift of an annulus map on R x [y_center - a, y_center + a], commuting with
/// (x, y) -> (x + 1, y).
struct AnnulusLiftMap {
  std::function<Vec2(Vec2)> lift;
  double a = 1.0;
  double b = 1.0;
  double y_center = 0.0;
};

struct TwistReport {
  bool twist_holds = false;
  double upper_min = 0.0, upper_max = 0.0;  // p1(f(x, top)) - x
  double lower_min = 0.0, lower_max = 0.0;  // p1(f(x, bottom)) - x
  double worst_product = 0.0;               // largest sampled product
  std::vector<Vec2> fixed_points;           // x in [0, 1)
};

/// Checks the boundary twist on `grid` samples per circle and hunts fixed
/// points of the lift on the fundamental domain. Throws NotALift.
TwistReport twist_check_and_search(const AnnulusLiftMap& m, int grid = 32);

}  // namespace torsionlab
