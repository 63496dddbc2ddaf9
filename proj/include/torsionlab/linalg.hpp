#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace torsionlab {

/// Planar point or vector.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// det of the matrix with columns a, b.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0;
  double c = 0.0, d = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 rotation(double radians) {
    const double co = std::cos(radians), si = std::sin(radians);
    return {co, -si, si, co};
  }

  constexpr double det() const { return a * d - b * c; }
  constexpr double trace() const { return a + d; }

  friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }
  friend constexpr bool operator==(const Mat2& m, const Mat2& n) = default;
};

inline Mat2 inverse(const Mat2& m) {
  const double det = m.det();
  return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

/// Axis-aligned rectangle [xmin, xmax] x [ymin, ymax].
struct Rect {
  double xmin = 0.0, xmax = 0.0;
  double ymin = 0.0, ymax = 0.0;

  constexpr bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

// Minimum-norm solution of H s = b for symmetric H.
inline Vec2 pinv_solve_symmetric(const Mat2& h, Vec2 b) {
  const double m = 0.5 * (h.a + h.d);
  const double half = 0.5 * (h.a - h.d);
  const double q = h.b;
  const double disc = std::hypot(half, q);
  const double l1 = m + disc;
  const double l2 = m - disc;
  Vec2 v1;
  if (disc == 0.0) {
    v1 = {1.0, 0.0};
  } else {
    const Vec2 c1{q, l1 - h.a};
    const Vec2 c2{l1 - h.d, q};
    v1 = norm(c1) >= norm(c2) ? c1 : c2;
    v1 = v1 / norm(v1);
  }
  const Vec2 v2{-v1.y, v1.x};
  const double scale = std::max(std::abs(l1), std::abs(l2));
  Vec2 out{};
  if (scale == 0.0) return out;
  if (std::abs(l1) > 1e-12 * scale) out = out + (dot(v1, b) / l1) * v1;
  if (std::abs(l2) > 1e-12 * scale) out = out + (dot(v2, b) / l2) * v2;
  return out;
}

/// Minimum-norm least-squares solution of J s = b.
inline Vec2 pinv_solve(const Mat2& j, Vec2 b) {
  const Mat2 jt{j.a, j.c, j.b, j.d};
  return pinv_solve_symmetric(jt * j, jt * b);
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace torsionlab
