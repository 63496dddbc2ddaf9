#pragma once

// Independent reference computations shared by the test binaries. None of
// these call into the library's numerical routines.

#include <cmath>
#include <functional>
#include <random>

#include "torsionlab/linalg.hpp"

namespace oracle {

using torsionlab::Mat2;
using torsionlab::Vec2;

inline int sign_det_minus_identity(const Mat2& l) {
  const double d = (l - Mat2::identity()).det();
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

// Central differences of a scalar function of (x, y).
struct FdJet {
  double gx, gy, hxx, hxy, hyy;
};

inline FdJet fd_jet(const std::function<double(double, double)>& f, double x, double y,
                    double h = 1e-5) {
  FdJet j{};
  j.gx = (f(x + h, y) - f(x - h, y)) / (2 * h);
  j.gy = (f(x, y + h) - f(x, y - h)) / (2 * h);
  const double hh = 1e-4;
  const double c = f(x, y);
  j.hxx = (f(x + hh, y) - 2 * c + f(x - hh, y)) / (hh * hh);
  j.hyy = (f(x, y + hh) - 2 * c + f(x, y - hh)) / (hh * hh);
  j.hxy = (f(x + hh, y + hh) - f(x + hh, y - hh) - f(x - hh, y + hh) + f(x - hh, y - hh)) /
          (4 * hh * hh);
  return j;
}

// Central-difference Jacobian of a planar map.
inline Mat2 fd_jacobian(const std::function<Vec2(Vec2)>& f, Vec2 z, double h = 1e-6) {
  const Vec2 dx = (f({z.x + h, z.y}) - f({z.x - h, z.y})) / (2 * h);
  const Vec2 dy = (f({z.x, z.y + h}) - f({z.x, z.y - h})) / (2 * h);
  return {dx.x, dy.x, dx.y, dy.y};
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// exp(t M) for traceless M, closed form via M^2 = -det(M) I.
inline Mat2 exp_traceless(const Mat2& m, double t) {
  const double q = -m.det();
  double c, s;
  if (q > 0) {
    const double w = std::sqrt(q);
    c = std::cosh(t * w);
    s = std::sinh(t * w) / w;
  } else if (q < 0) {
    const double w = std::sqrt(-q);
    c = std::cos(t * w);
    s = std::sin(t * w) / w;
  } else {
    c = 1.0;
    s = t;
  }
  return {c + s * m.a, s * m.b, s * m.c, c + s * m.d};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace oracle
