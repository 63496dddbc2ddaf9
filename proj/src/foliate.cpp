#include "torsionlab/foliate.hpp"

#include <algorithm>
#include <cmath>

#include "torsionlab/errors.hpp"
#include "torsionlab/geom.hpp"

namespace torsionlab {

Foliation gradient_foliation(const ScalarField& g) {
  return {[g](Vec2 z) { return g.jet(z).grad; }, 1e-10, "grad(" + g.description() + ")"};
}

Foliation expression_foliation(const Expr& fx, const Expr& fy) {
  return {[fx, fy](Vec2 z) { return Vec2{eval_value(fx, z.x, z.y), eval_value(fy, z.x, z.y)}; },
          1e-10, "(" + to_string(fx) + ", " + to_string(fy) + ")"};
}

Foliation reversed(const Foliation& f) {
  auto dir = f.direction;
  return {[dir](Vec2 z) { return -dir(z); }, f.singular_tol, "-" + f.description};
}

const char* to_string(LeafStop s) {
  switch (s) {
    case LeafStop::MaxLength: return "MaxLength";
    case LeafStop::DomainExit: return "DomainExit";
    case LeafStop::Singular: return "Singular";
  }
  return "?";
}

const char* to_string(TransverseVerdict v) {
  switch (v) {
    case TransverseVerdict::PositivelyTransverse: return "PositivelyTransverse";
    case TransverseVerdict::Tangent: return "Tangent";
    case TransverseVerdict::Negative: return "Negative";
  }
  return "?";
}

const char* to_string(SingularityClass c) {
  switch (c) {
    case SingularityClass::Sink: return "Sink";
    case SingularityClass::Source: return "Source";
    case SingularityClass::Saddle: return "Saddle";
    case SingularityClass::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

Mat2 fd_jacobian(const Foliation& f, Vec2 z) {
  const double h = 1e-6 * std::max(1.0, norm(z));
  const Vec2 ex = (f.direction(z + Vec2{h, 0.0}) - f.direction(z - Vec2{h, 0.0})) / (2.0 * h);
  const Vec2 ey = (f.direction(z + Vec2{0.0, h}) - f.direction(z - Vec2{0.0, h})) / (2.0 * h);
  return {ex.x, ey.x, ex.y, ey.y};
}

// Newton from z toward a zero of the field; returns it if one is found
// within `reach`.
std::optional<Vec2> nearby_zero(const Foliation& f, Vec2 z, double reach) {
  Vec2 w = z;
  for (int it = 0; it < 30; ++it) {
    const Vec2 d = f.direction(w);
    if (norm(d) < f.singular_tol) {
      if (norm(w - z) <= reach) return w;
      return std::nullopt;
    }
    const Mat2 j = fd_jacobian(f, w);
    const double det = j.det();
    if (!(std::abs(det) > 0.0)) return std::nullopt;
    const Vec2 s = inverse(j) * d;
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) return std::nullopt;
    w = w - s;
    if (norm(w - z) > 4.0 * reach) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Leaf integrate_leaf(const Foliation& f, Vec2 z0, double step, double max_len,
                    double stop_radius, const std::optional<Rect>& domain) {
  if (!(step > 0.0) || !(max_len > 0.0)) {
    throw InvalidArgument("step and max_len must be positive", {{"step", step}, {"max_len", max_len}});
  }
  if (norm(f.direction(z0)) < f.singular_tol) {
    throw StartsSingular("leaf starts at a singular point",
                         {{"x", z0.x}, {"y", z0.y}, {"singular_tol", f.singular_tol}});
  }
  Leaf leaf;
  leaf.vertices.push_back(z0);
  leaf.arclength.push_back(0.0);

  bool singular = false;
  auto unit = [&](Vec2 z) {
    const Vec2 d = f.direction(z);
    const double n = norm(d);
    if (n < f.singular_tol) {
      singular = true;
      return Vec2{};
    }
    return d / n;
  };

  Vec2 z = z0;
  double s = 0.0;
  const double reach = std::max(stop_radius, 0.0);
  while (s + 0.5 * step < max_len) {
    if (reach > 0.0 && nearby_zero(f, z, reach)) {
      leaf.stop = LeafStop::Singular;
      return leaf;
    }
    const double h = std::min(step, max_len - s);
    const Vec2 k1 = unit(z);
    const Vec2 k2 = unit(z + 0.5 * h * k1);
    const Vec2 k3 = unit(z + 0.5 * h * k2);
    const Vec2 k4 = unit(z + h * k3);
    if (singular) {
      leaf.stop = LeafStop::Singular;
      return leaf;
    }
    const Vec2 next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (domain && !domain->contains(next)) {
      leaf.stop = LeafStop::DomainExit;
      return leaf;
    }
    s += norm(next - z);
    z = next;
    leaf.vertices.push_back(z);
    leaf.arclength.push_back(s);
    if (norm(f.direction(z)) < f.singular_tol) {
      leaf.stop = LeafStop::Singular;
      return leaf;
    }
    if (h < step) break;
  }
  leaf.stop = LeafStop::MaxLength;
  return leaf;
}

ParamPath sample_path(const std::function<Vec2(double)>& curve, double t0, double t1, int n) {
  if (n < 1) throw InvalidArgument("path needs at least one segment", {{"n", n}});
  ParamPath p;
  p.params.reserve(n + 1);
  p.points.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = i == n ? t1 : t0 + (t1 - t0) * i / n;
    p.params.push_back(t);
    p.points.push_back(curve(t));
  }
  return p;
}

TransversalityReport transversality_report(const ParamPath& path, const Foliation& f,
                                           double stationary_tol) {
  if (path.points.size() < 2 || path.params.size() != path.points.size()) {
    throw InvalidArgument("path needs at least two vertices with parameters",
                          {{"vertices", path.points.size()}});
  }
  TransversalityReport r;
  double min_normalized = INFINITY;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const double dt = path.params[i + 1] - path.params[i];
    const Vec2 v = (path.points[i + 1] - path.points[i]) / dt;
    if (norm(v) < stationary_tol) continue;
    const Vec2 mid = 0.5 * (path.points[i] + path.points[i + 1]);
    const Vec2 d = f.direction(mid);
    const double det = cross(v, d);
    const double scale = norm(v) * norm(d);
    const double normalized = scale > 0.0 ? det / scale : 0.0;
    ++r.samples_used;
    r.min_det = std::min(r.min_det, det);
    min_normalized = std::min(min_normalized, normalized);
    if (!r.first_violation && normalized <= 1e-9) {
      r.first_violation = std::make_pair(0.5 * (path.params[i] + path.params[i + 1]), mid);
    }
  }
  if (r.samples_used == 0) {
    throw AllStationary("every path segment is stationary",
                        {{"segments", path.points.size() - 1}, {"stationary_tol", stationary_tol}});
  }
  if (min_normalized > 1e-9) {
    r.verdict = TransverseVerdict::PositivelyTransverse;
  } else if (min_normalized >= -1e-9) {
    r.verdict = TransverseVerdict::Tangent;
  } else {
    r.verdict = TransverseVerdict::Negative;
  }
  return r;
}

SingularityReport classify_singularity(const Foliation& f, Vec2 z0, double radius, int samples) {
  if (!(radius > 0.0) || samples < 8) {
    throw InvalidArgument("radius must be positive and samples >= 8",
                          {{"radius", radius}, {"samples", samples}});
  }
  // Half-step offset keeps the samples off the axes and diagonals.
  auto point = [&](double k) {
    const double a = kTwoPi * (k + 0.5) / samples;
    return z0 + radius * Vec2{std::cos(a), std::sin(a)};
  };
  std::vector<Vec2> dirs(samples);
  bool inward = true, outward = true, any_in = false, any_out = false, near_zero = false;
  for (int k = 0; k < samples; ++k) {
    const Vec2 z = point(k);
    const Vec2 d = f.direction(z);
    if (norm(d) < f.singular_tol) {
      throw SingularOnCircle("direction field vanishes on the circle",
                             {{"sample", k}, {"x", z.x}, {"y", z.y}});
    }
    dirs[k] = d;
    const double radial = dot(d, z - z0) / (norm(d) * radius);
    if (std::abs(radial) < 1e-12) near_zero = true;
    if (radial < 0.0) {
      any_in = true;
      outward = false;
    } else {
      any_out = true;
      inward = false;
    }
  }
  const Refiner refine = [&](double k) { return f.direction(point(k)); };
  const WindingPath path = build_winding_path(dirs, true, refine);
  SingularityReport r;
  r.foliation_index = winding_number(path);
  if (near_zero) {
    r.cls = SingularityClass::Unknown;
  } else if (r.foliation_index == 1 && inward) {
    r.cls = SingularityClass::Sink;
  } else if (r.foliation_index == 1 && outward) {
    r.cls = SingularityClass::Source;
  } else if (r.foliation_index <= 0 && any_in && any_out) {
    r.cls = SingularityClass::Saddle;
  }
  return r;
}

}  // namespace torsionlab
