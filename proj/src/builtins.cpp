#include "torsionlab/builtins.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace torsionlab::builtin {

Vec2 quadrant_flow(double t, Vec2 z) {
  const double x = z.x, y = z.y;
  if (x >= 0.0 && y >= 0.0) {
    const double r2 = x * x + y * y;
    if (r2 == 0.0) return {0.0, 0.0};
    const double k = r2 / (x * x * std::exp(-2.0 * t) + y * y * std::exp(2.0 * t));
    return {k * x * std::exp(-t), k * y * std::exp(t)};
  }
  if (x <= 0.0 && y >= 0.0) return {x * std::exp(-t), y * std::exp(-t)};
  if (x <= 0.0 && y <= 0.0) return {x * std::exp(-t), y * std::exp(t)};
  return {x * std::exp(t), y * std::exp(t)};
}

Vec2 quadrant_velocity(Vec2 z) {
  const double x = z.x, y = z.y;
  if (x > 0.0 && y > 0.0) {
    const double r2 = x * x + y * y;
    return {x * (x * x - 3.0 * y * y) / r2, y * (3.0 * x * x - y * y) / r2};
  }
  if (x <= 0.0 && y >= 0.0) return {-x, -y};
  if (x <= 0.0 && y <= 0.0) return {-x, y};
  return {x, y};
}

Vec2 quadrant_transverse(Vec2 z) {
  const double x = z.x, y = z.y;
  if (x > 0.0 && y > 0.0) {
    const double r2 = x * x + y * y;
    return {-y * (3.0 * x * x - y * y) / r2, x * (x * x - 3.0 * y * y) / r2};
  }
  if (x <= 0.0 && y >= 0.0) return {y, -x};
  if (x <= 0.0 && y <= 0.0) return {-y, -x};
  return {-y, x};
}

namespace {

// (1 - s)^4 (3/4 - s) = sum q[k] s^k
constexpr std::array<double, 6> kQ = {0.75, -4.0, 8.5, -9.0, 4.75, -1.0};

double base_integrand(double s) {
  const double v = std::sin(kPi / s);
  return s * v * v;
}

struct BaseTable {
  static constexpr int kNodes = 8192;
  std::vector<double> value;

  BaseTable() : value(kNodes + 1, 0.0) {
    // Gauss-Legendre 8 on panels short enough to resolve sin^2(pi/s).
    static constexpr double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                     0.7966664774136267, 0.9602898564975363};
    static constexpr double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
    auto panel = [](double a, double b) {
      const double m = 0.5 * (a + b), h = 0.5 * (b - a);
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        acc += ws[i] * (base_integrand(m - h * xs[i]) + base_integrand(m + h * xs[i]));
      }
      return acc * h;
    };
    // Below the first node the average of sin^2 is 1/2: int_U^inf du / (2 u^3).
    const double first = 1.0 / kNodes;
    value[1] = 0.25 * first * first;
    for (int k = 1; k < kNodes; ++k) {
      const double a = double(k) / kNodes, b = double(k + 1) / kNodes;
      const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (a * a / 16.0))));
      double acc = 0.0;
      for (int p = 0; p < pieces; ++p) {
        acc += panel(a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces);
      }
      value[k + 1] = value[k] + acc;
    }
  }
};

const BaseTable& base_table() {
  static const BaseTable table;
  return table;
}

}  // namespace

// Factored form: the expanded polynomial cancels to the wrong sign near s = 1.
double sin2_phi(double s) {
  const double u = 1.0 - s;
  return kSin2PhiScale * std::pow(s, 14) * (u * u) * (u * u) * (0.75 - s);
}

double sin2_phi_prime(double s) {
  double acc = 0.0;
  for (int k = 5; k >= 0; --k) acc = acc * s + kQ[k] * (14 + k);
  return kSin2PhiScale * std::pow(s, 13) * acc;
}

double sin2_phi_integral(double s) {
  double acc = 0.0;
  for (int k = 5; k >= 0; --k) acc = acc * s + kQ[k] / (15 + k);
  return kSin2PhiScale * std::pow(s, 15) * acc;
}

double sin2_base_integral(double y) {
  if (y <= 0.0) return 0.0;
  const BaseTable& t = base_table();
  const int n = BaseTable::kNodes;
  if (y >= 1.0) return t.value[n];
  const double pos = y * n;
  const int k = std::min(static_cast<int>(pos), n - 1);
  if (k == 0) return 0.25 * y * y;
  const double h = 1.0 / n;
  const double a = double(k) / n;
  const double u = (y - a) / h;
  const double y0 = t.value[k], y1 = t.value[k + 1];
  const double d0 = base_integrand(a) * h, d1 = base_integrand(a + h) * h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
  return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
}

ScalarField sin2_generating_function() {
  return ScalarField::custom(
      "sin2_generating_function", [](double x, double y) {
        Jet2 j;
        if (y <= 0.0) return j;
        if (y >= 1.0) {
          j.value = sin2_base_integral(1.0);
          return j;
        }
        const double sx = std::sin(kPi * x), s2x = std::sin(kTwoPi * x);
        const double c2x = std::cos(kTwoPi * x);
        const double phi = sin2_phi(y), big_phi = sin2_phi_integral(y);
        const double sy = std::sin(kPi / y);
        j.value = sin2_base_integral(y) + big_phi * sx * sx;
        j.grad = {kPi * s2x * big_phi, y * sy * sy + phi * sx * sx};
        j.hxx = 2.0 * kPi * kPi * c2x * big_phi;
        j.hxy = kPi * s2x * phi;
        j.hyy = sy * sy - (kPi / y) * std::sin(kTwoPi / y) + sin2_phi_prime(y) * sx * sx;
        return j;
      });
}

double shear_phi(double y) {
  if (y <= 1.0 / 6.0 || y >= 5.0 / 6.0) return y;
  const double q = 9.0 * (y - 1.0 / 6.0) * (5.0 / 6.0 - y);
  return y - 0.05 * q * q * q;
}

}  // namespace torsionlab::builtin
