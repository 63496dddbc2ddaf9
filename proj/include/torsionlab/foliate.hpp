#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/genfunc.hpp"
#include "torsionlab/linalg.hpp"

namespace torsionlab {

/// Oriented singular foliation given by a direction field; leaves are its
/// integral curves.
struct Foliation {
  std::function<Vec2(Vec2)> direction;
  double singular_tol = 1e-10;
  std::string description;
};

Foliation gradient_foliation(const ScalarField& g);

/// Field (fx(x, y), fy(x, y)) given as expressions.
Foliation expression_foliation(const Expr& fx, const Expr& fy);

/// Same leaves, opposite orientation.
Foliation reversed(const Foliation& f);

enum class LeafStop { MaxLength, DomainExit, Singular };

const char* to_string(LeafStop s);

struct Leaf {
  std::vector<Vec2> vertices;
  std::vector<double> arclength;
  LeafStop stop = LeafStop::MaxLength;
};

/// RK4 with fixed step on the normalized field, forward from z0. Stops at
/// max_len, on leaving `domain` (if given), or within stop_radius of a zero
/// of the field. Throws StartsSingular.
Leaf integrate_leaf(const Foliation& f, Vec2 z0, double step, double max_len,
                    double stop_radius, const std::optional<Rect>& domain = std::nullopt);

struct ParamPath {
  std::vector<double> params;
  std::vector<Vec2> points;
};

/// Samples t -> curve(t) at n + 1 equally spaced parameters of [t0, t1].
ParamPath sample_path(const std::function<Vec2(double)>& curve, double t0, double t1, int n);

enum class TransverseVerdict { PositivelyTransverse, Tangent, Negative };

const char* to_string(TransverseVerdict v);

struct TransversalityReport {
  double min_det = INFINITY;
  std::optional<std::pair<double, Vec2>> first_violation;
  int samples_used = 0;
  TransverseVerdict verdict = TransverseVerdict::Tangent;
};

/// det[v | d] at each segment midpoint, v the path velocity and d the field.
/// Segments with |v| < stationary_tol are skipped. A determinant within
/// 1e-9 * |v| |d| of zero counts as tangent. Throws AllStationary.
TransversalityReport transversality_report(const ParamPath& path, const Foliation& f,
                                           double stationary_tol = 1e-12);

enum class SingularityClass { Sink, Source, Saddle, Unknown };

const char* to_string(SingularityClass c);

struct SingularityReport {
  SingularityClass cls = SingularityClass::Unknown;
  int foliation_index = 0;
};

/// Winding of the field on the circle |z - z0| = radius and the sign pattern
/// of its radial component, sampled at angles 2 pi (k + 1/2) / samples.
/// Throws SingularOnCircle.
SingularityReport classify_singularity(const Foliation& f, Vec2 z0, double radius,
                                       int samples = 256);

}  // namespace torsionlab
