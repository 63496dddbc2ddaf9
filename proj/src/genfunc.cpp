#include "torsionlab/genfunc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torsionlab/errors.hpp"

namespace torsionlab {

ScalarField ScalarField::from_expr(Expr e) {
  std::string text = to_string(e);
  Expr captured = e;
  return ScalarField(
      std::move(text),
      [captured](double x, double y) { return eval_jet2(captured, x, y); }, std::move(e));
}

ScalarField ScalarField::from_text(std::string_view text) { return from_expr(parse_expr(text)); }

ScalarField ScalarField::custom(std::string description, JetFn fn) {
  return ScalarField(std::move(description), std::move(fn), std::nullopt);
}

double sampled_twist_max(const ScalarField& g, const Rect& region, int n) {
  double worst = -INFINITY;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 z{region.xmin + (region.xmax - region.xmin) * i / (n - 1),
                   region.ymin + (region.ymax - region.ymin) * j / (n - 1)};
      worst = std::max(worst, g.jet(z).hxy);
    }
  }
  return worst;
}

GenIsotopy make_gen_isotopy(ScalarField g, double twist_bound_c, const Rect& region) {
  if (!(twist_bound_c < 1.0)) {
    throw InvalidArgument("twist bound must be < 1", {{"twist_bound_c", twist_bound_c}});
  }
  const double sampled = sampled_twist_max(g, region, 64);
  if (sampled > twist_bound_c) {
    throw TwistBoundViolated("sampled d12g = " + std::to_string(sampled) +
                                 " exceeds twist bound " + std::to_string(twist_bound_c),
                             {{"sampled_max", sampled}, {"twist_bound_c", twist_bound_c}});
  }
  return GenIsotopy{std::move(g), twist_bound_c};
}

namespace {

[[noreturn]] void diverged(int iterations, double residual, Vec2 z, double t) {
  throw SolverDiverged("generating-function solve failed at (" + std::to_string(z.x) + ", " +
                           std::to_string(z.y) + "), t = " + std::to_string(t),
                       {{"iterations", iterations}, {"last_residual", residual}});
}

// h(X) = X - x - t d2g(X, y) is increasing whenever t d12g < 1.
void bracketed_newton(const GenIsotopy& iso, double t, Vec2 z, GfSolve& s) {
  auto h = [&](double X, double* slope) {
    const Jet2 j = iso.g.jet({X, z.y});
    if (slope) *slope = 1.0 - t * j.hxy;
    return X - z.x - t * j.grad.y;
  };
  const double h0 = h(z.x, nullptr);
  if (h0 == 0.0) {
    s.X = z.x;
    s.residual = 0.0;
    return;
  }
  const double margin = std::max(1.0 - t * iso.twist_bound_c, 1e-3);
  double lo = z.x, hi = z.x;
  double span = std::abs(h0) / margin;
  bool found = false;
  for (int expand = 0; expand < 60 && !found; ++expand) {
    const double far = h0 < 0.0 ? z.x + span : z.x - span;
    const double hf = h(far, nullptr);
    if ((h0 < 0.0) != (hf < 0.0) || hf == 0.0) {
      lo = std::min(z.x, far);
      hi = std::max(z.x, far);
      found = true;
    }
    span *= 2.0;
  }
  if (!found) diverged(s.iterations, std::abs(h0), z, t);

  double X = 0.5 * (lo + hi);
  for (int it = 0; it < iso.solver_max_iter; ++it) {
    double slope = 0.0;
    const double hx = h(X, &slope);
    s.residuals.push_back(std::abs(hx));
    ++s.iterations;
    if (std::abs(hx) <= iso.solver_tol) {
      s.X = X;
      s.residual = std::abs(hx);
      return;
    }
    if (hx < 0.0) {
      lo = X;
    } else {
      hi = X;
    }
    double next = slope > 0.0 ? X - hx / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == X || hi - lo <= 4e-16 * std::max(1.0, std::abs(X))) {
      s.X = X;
      s.residual = std::abs(hx);
      if (s.residual <= 1e3 * iso.solver_tol) return;
      diverged(s.iterations, s.residual, z, t);
    }
    X = next;
  }
  diverged(s.iterations, s.residuals.back(), z, t);
}

}  // namespace

GfSolve gf_solve(const GenIsotopy& iso, double t, Vec2 z) {
  GfSolve s;
  double X = z.x;
  bool stalled = false;
  for (int it = 0; it <= iso.solver_max_iter; ++it) {
    const Jet2 j = iso.g.jet({X, z.y});
    const double next = z.x + t * j.grad.y;
    const double residual = std::abs(X - next);
    if (!std::isfinite(residual)) {
      stalled = true;
      break;
    }
    s.residuals.push_back(residual);
    if (residual <= iso.solver_tol) {
      s.X = X;
      s.Y = z.y - t * j.grad.x;
      s.residual = residual;
      s.iterations = it;
      return s;
    }
    const std::size_t k = s.residuals.size();
    if (k > 2 && residual >= s.residuals[k - 2]) {
      stalled = true;
      break;
    }
    X = next;
  }
  (void)stalled;
  s.bracketed_newton = true;
  s.iterations = static_cast<int>(s.residuals.size());
  bracketed_newton(iso, t, z, s);
  s.Y = z.y - t * iso.g.jet({s.X, z.y}).grad.x;
  return s;
}

Vec2 gf_apply(const GenIsotopy& iso, double t, Vec2 z) {
  const GfSolve s = gf_solve(iso, t, z);
  return {s.X, s.Y};
}

Mat2 gf_jacobian(const GenIsotopy& iso, double t, Vec2 z) {
  const GfSolve s = gf_solve(iso, t, z);
  const Jet2 j = iso.g.jet({s.X, z.y});
  const double sigma = t * j.hxy;
  const double rho = t * j.hxx;
  const double tau = t * j.hyy;
  const double k = 1.0 - sigma;
  return {1.0 / k, tau / k, -rho / k, (-rho * tau + k * k) / k};
}

Vec2 gf_alt_apply(const GenIsotopy& iso, double t, Vec2 z) {
  if (t == 0.0) return z;
  const GfSolve s = gf_solve(iso, 1.0, z);
  if (t == 1.0) return {s.X, s.Y};
  if (t <= 0.5) return {z.x + 2.0 * t * (s.X - z.x), z.y};
  return {s.X, z.y + (2.0 * t - 1.0) * (s.Y - z.y)};
}

Mat2 gf_alt_jacobian(const GenIsotopy& iso, double t, Vec2 z) {
  const Mat2 jf = gf_jacobian(iso, 1.0, z);
  if (t <= 0.5) {
    return {1.0 + 2.0 * t * (jf.a - 1.0), 2.0 * t * jf.b, 0.0, 1.0};
  }
  const double s = 2.0 * t - 1.0;
  return {jf.a, jf.b, s * jf.c, 1.0 + s * (jf.d - 1.0)};
}

const char* to_string(MorseType m) {
  switch (m) {
    case MorseType::Min: return "Min";
    case MorseType::Max: return "Max";
    case MorseType::Saddle: return "Saddle";
    case MorseType::Degenerate: return "Degenerate";
  }
  return "?";
}

MorseType classify_hessian(const Mat2& h) {
  const double det = h.det();
  if (std::abs(det) <= 1e-8) return MorseType::Degenerate;
  if (det < 0.0) return MorseType::Saddle;
  return h.trace() > 0.0 ? MorseType::Min : MorseType::Max;
}

namespace {

std::optional<CriticalPoint> newton_critical(const ScalarField& g, Vec2 z, const Rect& region) {
  const double width = std::max(region.xmax - region.xmin, region.ymax - region.ymin);
  Jet2 j;
  try {
    for (int it = 0; it < 200; ++it) {
      j = g.jet(z);
      const double res = norm(j.grad);
      if (res <= 1e-15) break;
      const Vec2 step = pinv_solve_symmetric(j.hessian(), j.grad);
      if (!std::isfinite(step.x) || !std::isfinite(step.y)) return std::nullopt;
      z = z - step;
      if (norm(z - Vec2{0.5 * (region.xmin + region.xmax), 0.5 * (region.ymin + region.ymax)}) >
          4.0 * width) {
        return std::nullopt;
      }
      if (norm(step) <= 1e-15 * std::max(1.0, norm(z))) {
        j = g.jet(z);
        break;
      }
    }
  } catch (const DomainError&) {
    return std::nullopt;
  }
  const double res = norm(j.grad);
  if (!(res <= 1e-9) || !region.contains(z)) return std::nullopt;
  CriticalPoint cp;
  cp.location = z;
  cp.gradient_residual = res;
  cp.hessian = j.hessian();
  cp.morse_type = classify_hessian(cp.hessian);
  return cp;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const ScalarField& g, const Rect& region,
                                                int grid_n) {
  if (grid_n < 8) throw InvalidArgument("grid_n must be at least 8", {{"grid_n", grid_n}});
  const int n = grid_n;
  const double dx = (region.xmax - region.xmin) / n;
  const double dy = (region.ymax - region.ymin) / n;
  auto node = [&](int i, int j) { return Vec2{region.xmin + i * dx, region.ymin + j * dy}; };

  std::vector<Vec2> grads(static_cast<std::size_t>((n + 1) * (n + 1)));
  std::vector<char> ok(grads.size(), 1);
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i * (n + 1) + j); };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      try {
        grads[at(i, j)] = g.jet(node(i, j)).grad;
      } catch (const DomainError&) {
        ok[at(i, j)] = 0;
      }
    }
  }

  std::vector<Vec2> seeds;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t c[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
      if (!ok[c[0]] || !ok[c[1]] || !ok[c[2]] || !ok[c[3]]) continue;
      double gx_lo = INFINITY, gx_hi = -INFINITY, gy_lo = INFINITY, gy_hi = -INFINITY;
      for (std::size_t k : c) {
        gx_lo = std::min(gx_lo, grads[k].x);
        gx_hi = std::max(gx_hi, grads[k].x);
        gy_lo = std::min(gy_lo, grads[k].y);
        gy_hi = std::max(gy_hi, grads[k].y);
      }
      if (gx_lo <= 0.0 && gx_hi >= 0.0 && gy_lo <= 0.0 && gy_hi >= 0.0) {
        seeds.push_back(node(i, j) + Vec2{0.5 * dx, 0.5 * dy});
      }
    }
  }
  // Zeros where a component touches 0 without changing sign show up as
  // discrete minima of |grad g|.
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (!ok[at(i, j)]) continue;
      const double here = norm(grads[at(i, j)]);
      bool minimum = true;
      for (int di = -1; di <= 1 && minimum; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int a = i + di, b = j + dj;
          if (a < 0 || a > n || b < 0 || b > n || !ok[at(a, b)]) continue;
          if (norm(grads[at(a, b)]) < here) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) seeds.push_back(node(i, j));
    }
  }

  std::vector<CriticalPoint> found;
  for (const Vec2& seed : seeds) {
    auto cp = newton_critical(g, seed, region);
    if (!cp) continue;
    bool duplicate = false;
    for (auto& existing : found) {
      if (norm(existing.location - cp->location) < 1e-6) {
        if (cp->gradient_residual < existing.gradient_residual) existing = *cp;
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(*cp);
  }
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.location.x != b.location.x) return a.location.x < b.location.x;
    return a.location.y < b.location.y;
  });
  return found;
}

std::vector<CriticalPoint> find_critical_points(const GenIsotopy& iso, const Rect& region,
                                                int grid_n) {
  return find_critical_points(iso.g, region, grid_n);
}

}  // namespace torsionlab
