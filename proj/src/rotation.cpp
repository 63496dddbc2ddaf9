#include "torsionlab/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "torsionlab/errors.hpp"
#include "torsionlab/geom.hpp"

namespace torsionlab {

namespace {

void require_orientation_preserving(const Mat2& a) {
  if (!(a.det() > 0.0)) {
    throw NotOrientationPreserving("matrix determinant is not positive",
                                   {{"det", a.det()}, {"matrix", {a.a, a.b, a.c, a.d}}});
  }
}

Vec2 unit_turns(double phi) { return {std::cos(kTwoPi * phi), std::sin(kTwoPi * phi)}; }

int worker_count(int jobs) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TORSIONLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<int>(v);
  }
  return std::clamp(n, 1, std::max(jobs, 1));
}

}  // namespace

double linear_blowup_rotation(const Mat2& a) {
  require_orientation_preserving(a);
  const double tr = a.trace();
  const double det = a.det();
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) {
    const double c = std::clamp(tr / (2.0 * std::sqrt(det)), -1.0, 1.0);
    const double turns = std::acos(c) / kTwoPi;
    return a.c > 0.0 ? turns : 1.0 - turns;
  }
  return tr > 0.0 ? 0.0 : 0.5;
}

double iterated_linear_rotation(const Mat2& a, int n_iter) {
  require_orientation_preserving(a);
  // Branch chosen so the displacement is continuous: a positive eigenvalue
  // excludes 1/2, a negative one excludes 0.
  const bool shift = a.trace() < 0.0;
  auto lift = [&](double x) {
    const Vec2 v = unit_turns(x);
    const Vec2 w = a * v;
    double d = std::atan2(cross(v, w), dot(v, w)) / kTwoPi;
    if (shift && d < 0.0) d += 1.0;
    return x + d;
  };
  const double r = circle_rotation_number(lift, n_iter);
  return r - std::floor(r);
}

double isotopy_blowup_rotation(const MatrixPath& dpath, int grid) {
  const Mat2 end = dpath(1.0);
  const double cls = linear_blowup_rotation(end);
  const double anchor =
      tracked_angle_change([&](double t) { return dpath(t) * Vec2{1.0, 0.0}; }, 0.0, 1.0, grid) /
      kTwoPi;
  // d(phi) = angle(A e(phi)) / 2pi - phi, continued from d(0) = anchor.
  double d = anchor, lo = anchor, hi = anchor;
  const int steps = 512;
  for (int i = 0; i < steps; ++i) {
    const double p0 = 0.5 * i / steps, p1 = 0.5 * (i + 1) / steps;
    const double turn =
        tracked_angle_change([&](double p) { return end * unit_turns(p); }, p0, p1, 1) / kTwoPi;
    d += turn - (p1 - p0);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  const double mid = 0.5 * (lo + hi);
  return cls + std::round(mid - cls);
}

MatrixPath jacobian_path(const PlanarIsotopy& iso, Vec2 z, double h) {
  return [iso, z, h](double t) {
    const Vec2 ex = (iso(t, z + Vec2{h, 0.0}) - iso(t, z - Vec2{h, 0.0})) / (2.0 * h);
    const Vec2 ey = (iso(t, z + Vec2{0.0, h}) - iso(t, z - Vec2{0.0, h})) / (2.0 * h);
    return Mat2{ex.x, ey.x, ex.y, ey.y};
  };
}

namespace {

struct SeedResult {
  std::vector<std::pair<int, double>> kept;  // (n, rho)
};

// Follows one orbit up to max(ns) iterates and records rho_n for each
// scheduled n whose E(U, V, n) membership holds.
SeedResult follow_seed(const PlanarIsotopy& iso, Vec2 center, Vec2 z0, double u, double v,
                       const std::vector<int>& ns) {
  SeedResult out;
  const int n_last = ns.back();
  Vec2 z = z0;
  double turns = 0.0;
  std::size_t next = 0;
  for (int i = 1; i <= n_last; ++i) {
    try {
      turns += trajectory_angle(iso, center, z) / kTwoPi;
    } catch (const Error&) {
      return out;
    }
    z = iso(1.0, z);
    const double r = norm(z - center);
    if (!(r < u)) return out;
    if (next < ns.size() && ns[next] == i) {
      if (r > v) out.kept.emplace_back(i, turns / i);
      ++next;
    }
  }
  return out;
}

std::vector<Vec2> seed_points(Vec2 center, double u, double v, int seeds) {
  std::vector<Vec2> pts(seeds);
  for (int k = 0; k < seeds; ++k) {
    const double r = v + (u - v) * (k + 0.5) / seeds;
    const double turn = std::fmod(k * 0.6180339887, 1.0);
    pts[k] = center + r * unit_turns(turn);
  }
  return pts;
}

std::vector<SeedResult> run_seeds(const PlanarIsotopy& iso, Vec2 center, double u, double v,
                                  const std::vector<int>& ns, int seeds) {
  const std::vector<Vec2> pts = seed_points(center, u, v, seeds);
  std::vector<SeedResult> results(seeds);
  const int workers = worker_count(seeds);
  auto work = [&](int w) {
    for (int k = w; k < seeds; k += workers) {
      results[k] = follow_seed(iso, center, pts[k], u, v, ns);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace

std::vector<RotationSample> rotation_samples(const PlanarIsotopy& iso, Vec2 center,
                                             double u_radius, double v_radius, int n, int seeds) {
  if (!(v_radius > 0.0 && v_radius < u_radius) || n < 1 || seeds < 1) {
    throw InvalidArgument("need 0 < V < U, n >= 1 and seeds >= 1",
                          {{"U", u_radius}, {"V", v_radius}, {"n", n}, {"seeds", seeds}});
  }
  const auto results = run_seeds(iso, center, u_radius, v_radius, {n}, seeds);
  const std::vector<Vec2> pts = seed_points(center, u_radius, v_radius, seeds);
  std::vector<RotationSample> out;
  for (int k = 0; k < seeds; ++k) {
    for (const auto& [m, rho] : results[k].kept) out.push_back({0, m, rho, pts[k], k});
  }
  return out;
}

RotationSetEstimate local_rotation_set_estimate(const PlanarIsotopy& iso, Vec2 center, double r0,
                                                int levels, int n_max,
                                                double divergence_threshold, int seeds) {
  if (levels < 1 || n_max < 4 || !(r0 > 0.0) || seeds < 1) {
    throw InvalidArgument("need levels >= 1, n_max >= 4, r0 > 0",
                          {{"levels", levels}, {"n_max", n_max}, {"r0", r0}});
  }
  std::vector<int> ns;
  for (int n = 1; n < n_max; n *= 2) ns.push_back(n);
  ns.push_back(n_max);

  RotationSetEstimate best;
  bool found = false;
  int total = 0;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::array();
  for (int k = 0; k < levels; ++k) {
    const double u = r0 / std::ldexp(1.0, k);
    const double v = r0 / std::ldexp(1.0, k + 2);
    const auto results = run_seeds(iso, center, u, v, ns, seeds);
    const std::vector<Vec2> pts = seed_points(center, u, v, seeds);
    RotationSetEstimate est;
    est.u_radius = u;
    est.v_radius = v;
    est.level = k;
    est.n_min_used = INT32_MAX;
    int level_count = 0;
    for (int s = 0; s < seeds; ++s) {
      for (const auto& [n, rho] : results[s].kept) {
        ++level_count;
        if (4 * n < n_max) continue;
        est.samples.push_back({k, n, rho, pts[s], s});
        est.n_min_used = std::min(est.n_min_used, n);
      }
    }
    total += level_count;
    diagnostics.push_back({{"level", k}, {"U", u}, {"V", v}, {"samples", level_count}});
    if (!est.samples.empty()) {
      best = std::move(est);
      found = true;
    }
  }
  if (!found) {
    throw NoSamples("no orbit satisfied the E(U, V, n) conditions",
                    {{"levels", diagnostics}, {"n_max", n_max}});
  }
  best.total_samples = total;
  best.lo = INFINITY;
  best.hi = -INFINITY;
  for (const auto& s : best.samples) {
    best.lo = std::min(best.lo, s.rho);
    best.hi = std::max(best.hi, s.rho);
  }
  best.lo_neg_infinite = best.lo < -divergence_threshold;
  best.hi_pos_infinite = best.hi > divergence_threshold;
  return best;
}

const char* to_string(TorsionClass c) {
  switch (c) {
    case TorsionClass::TorsionLow: return "TorsionLow";
    case TorsionClass::NotTorsionLow: return "NotTorsionLow";
    case TorsionClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(EigenCase c) {
  switch (c) {
    case EigenCase::ComplexEigen: return "ComplexEigen";
    case EigenCase::NegativeRealPair: return "NegativeRealPair";
    case EigenCase::PositiveSaddle: return "PositiveSaddle";
    case EigenCase::Other: return "Other";
  }
  return "?";
}

EigenCase eigen_case(const Mat2& a) {
  const double tr = a.trace();
  const double disc = tr * tr - 4.0 * a.det();
  if (disc < 0.0) return EigenCase::ComplexEigen;
  const double root = std::sqrt(disc);
  const double l1 = 0.5 * (tr - root), l2 = 0.5 * (tr + root);
  if (l1 < 0.0 && l2 < 0.0) return EigenCase::NegativeRealPair;
  if (l1 > 0.0 && l1 < 1.0 && l2 > 1.0) return EigenCase::PositiveSaddle;
  return EigenCase::Other;
}

TorsionVerdict torsion_low_classify(const MatrixPath& dpath, int grid) {
  const Mat2 end = dpath(1.0);
  require_orientation_preserving(end);
  TorsionVerdict v;
  v.rho = isotopy_blowup_rotation(dpath, grid);
  v.degenerate = std::abs((end - Mat2::identity()).det()) <= 1e-8;
  v.case_tag = eigen_case(end);
  const double m = std::abs(v.rho);
  if (v.degenerate && std::abs(m - 1.0) <= 1e-8) {
    v.classification = TorsionClass::Inconclusive;
  } else if (v.degenerate ? m <= 1.0 : m < 1.0) {
    v.classification = TorsionClass::TorsionLow;
  } else {
    v.classification = TorsionClass::NotTorsionLow;
  }
  return v;
}

TwistReport twist_check_and_search(const AnnulusLiftMap& m, int grid) {
  if (grid < 16 || !(m.a > 0.0)) {
    throw InvalidArgument("need grid >= 16 and a > 0", {{"grid", grid}, {"a", m.a}});
  }
  const double top = m.y_center + m.a, bottom = m.y_center - m.a;
  for (int k = 0; k < 16; ++k) {
    const Vec2 z{std::fmod(k * 0.6180339887, 1.0) - 0.5, bottom + 2.0 * m.a * (k + 0.5) / 16.0};
    const Vec2 gap = m.lift(z + Vec2{1.0, 0.0}) - m.lift(z) - Vec2{1.0, 0.0};
    if (!(norm(gap) <= 1e-9)) {
      throw NotALift("lift does not commute with the deck translation",
                     {{"x", z.x}, {"y", z.y}, {"defect", norm(gap)}});
    }
  }

  TwistReport r;
  r.upper_min = r.lower_min = INFINITY;
  r.upper_max = r.lower_max = -INFINITY;
  for (int i = 0; i < grid; ++i) {
    const double x = double(i) / grid;
    const double du = m.lift({x, top}).x - x;
    const double dl = m.lift({x, bottom}).x - x;
    r.upper_min = std::min(r.upper_min, du);
    r.upper_max = std::max(r.upper_max, du);
    r.lower_min = std::min(r.lower_min, dl);
    r.lower_max = std::max(r.lower_max, dl);
  }
  r.worst_product = std::max({r.upper_min * r.lower_min, r.upper_min * r.lower_max,
                              r.upper_max * r.lower_min, r.upper_max * r.lower_max});
  r.twist_holds = r.worst_product < 0.0;

  auto disp = [&](Vec2 z) { return m.lift(z) - z; };
  const double dx = 1.0 / grid, dy = 2.0 * m.a / grid;
  std::vector<Vec2> node((grid + 1) * (grid + 1));
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i * (grid + 1) + j); };
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) node[at(i, j)] = disp({i * dx, bottom + j * dy});
  }
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 c[4] = {node[at(i, j)], node[at(i + 1, j)], node[at(i, j + 1)],
                         node[at(i + 1, j + 1)]};
      double xl = INFINITY, xh = -INFINITY, yl = INFINITY, yh = -INFINITY;
      for (const Vec2& v : c) {
        xl = std::min(xl, v.x);
        xh = std::max(xh, v.x);
        yl = std::min(yl, v.y);
        yh = std::max(yh, v.y);
      }
      if (!(xl <= 0.0 && xh >= 0.0 && yl <= 0.0 && yh >= 0.0)) continue;

      // Gauss-Newton with the pseudo-inverse: fixed sets may be curves.
      Vec2 z{(i + 0.5) * dx, bottom + (j + 0.5) * dy};
      Vec2 d = disp(z);
      for (int it = 0; it < 60 && norm(d) > 1e-14; ++it) {
        const double h = 1e-7;
        const Vec2 ex = (disp(z + Vec2{h, 0.0}) - disp(z - Vec2{h, 0.0})) / (2.0 * h);
        const Vec2 ey = (disp(z + Vec2{0.0, h}) - disp(z - Vec2{0.0, h})) / (2.0 * h);
        const Vec2 step = pinv_solve({ex.x, ey.x, ex.y, ey.y}, d);
        if (!std::isfinite(step.x) || !std::isfinite(step.y) || norm(step) == 0.0) break;
        z = z - step;
        d = disp(z);
      }
      if (!(norm(d) <= 1e-9) || z.y < bottom || z.y > top) continue;
      z.x -= std::floor(z.x);
      bool dup = false;
      for (const Vec2& p : r.fixed_points) {
        double gx = std::abs(p.x - z.x);
        gx = std::min(gx, 1.0 - gx);
        if (std::hypot(gx, p.y - z.y) < 1e-6) {
          dup = true;
          break;
        }
      }
      if (!dup) r.fixed_points.push_back(z);
    }
  }
  std::sort(r.fixed_points.begin(), r.fixed_points.end(), [](Vec2 a, Vec2 b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  return r;
}

}  // namespace torsionlab
