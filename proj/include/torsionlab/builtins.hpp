#pragma once

#include "torsionlab/genfunc.hpp"
#include "torsionlab/linalg.hpp"

namespace torsionlab::builtin {

// Quadrant flow: the time-t map of a continuous field V whose first-quadrant
// part is conjugate to a hyperbolic flow, plus a transverse field xi.
Vec2 quadrant_flow(double t, Vec2 z);
Vec2 quadrant_velocity(Vec2 z);
Vec2 quadrant_transverse(Vec2 z);

// phi(s) = kSin2PhiScale s^14 (1 - s)^4 (3/4 - s) on [0, 1].
inline constexpr double kSin2PhiScale = 19000.0;
double sin2_phi(double s);
double sin2_phi_prime(double s);
double sin2_phi_integral(double s);  // int_0^s phi
/// int_0^y s sin^2(pi / s) ds, tabulated with Hermite interpolation.
double sin2_base_integral(double y);

/// g(x, y) = int_0^y (s sin^2(pi/s) + phi(s) sin^2(pi x)) ds for 0 < y < 1,
/// constant below 0 and above 1.
ScalarField sin2_generating_function();

// phi(y) = y - 0.05 (9 (y - 1/6)(5/6 - y))^3 on the middle band, y elsewhere.
double shear_phi(double y);

}  // namespace torsionlab::builtin
