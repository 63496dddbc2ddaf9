#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/geom.hpp"

using namespace torsionlab;

namespace {

std::vector<Vec2> circle(int n, int turns = 1, double scale = 1.0) {
  std::vector<Vec2> v;
  for (int k = 0; k < n; ++k) {
    const double a = kTwoPi * turns * k / n;
    v.push_back({scale * std::cos(a), scale * std::sin(a)});
  }
  return v;
}

int degree(const std::vector<Vec2>& v) { return winding_number(build_winding_path(v, true)); }

}  // namespace

TEST_CASE("constant path has zero lift") {
  const std::vector<Vec2> v(100, Vec2{1.0, 0.0});
  const WindingPath p = build_winding_path(v, true);
  CHECK(std::all_of(p.lift.begin(), p.lift.end(), [](double a) { return a == 0.0; }));
  CHECK(winding_number(p) == 0);
}

TEST_CASE("unit circle turns once") {
  const WindingPath p = build_winding_path(circle(64), true);
  CHECK(p.total_angle() == doctest::Approx(kTwoPi).epsilon(1e-12));
  CHECK(winding_number(p) == 1);
}

TEST_CASE("error contracts of the lift") {
  std::vector<Vec2> wild;
  for (int k = 0; k < 8; ++k) wild.push_back(k % 2 ? Vec2{-1.0, 1e-3} : Vec2{1.0, 0.0});
  CHECK_THROWS_AS(build_winding_path(wild, true), RefinementExhausted);
  std::vector<Vec2> with_zero = circle(16);
  with_zero[5] = {0.0, 0.0};
  CHECK_THROWS_AS(build_winding_path(with_zero, true), ZeroVector);
  // A refiner that keeps returning the far endpoint never resolves the step.
  auto stubborn = [](double s) { return s < 0.5 ? Vec2{1.0, 0.0} : Vec2{-1.0, 1e-3}; };
  const std::vector<Vec2> two{{1.0, 0.0}, {-1.0, 1e-3}};
  CHECK_THROWS_AS(build_winding_path(two, false, stubborn), RefinementExhausted);
  CHECK_THROWS_AS(winding_number(build_winding_path(two, false, [](double s) {
                    return Vec2{std::cos(kPi * s), std::sin(kPi * s)};
                  })),
                  NotClosed);
}

TEST_CASE("refiner resolves a coarse circle") {
  const std::vector<Vec2> coarse{{1.0, 0.0}, {-1.0, 1e-9}};
  auto refiner = [](double s) { return Vec2{std::cos(kPi * s), std::sin(kPi * s)}; };
  CHECK(winding_number(build_winding_path(coarse, true, refiner)) == 1);
}

TEST_CASE("displacement of 2 id on the unit circle") {
  std::vector<Vec2> v;
  for (const Vec2& z : circle(256)) v.push_back(2.0 * z - z);
  CHECK(degree(v) == oracle::sign_det_minus_identity({2.0, 0.0, 0.0, 2.0}));
}

TEST_CASE("winding invariances") {
  std::mt19937_64 rng(7);
  for (int turns : {-3, -1, 0, 2, 5}) {
    std::vector<Vec2> v;
    for (int k = 0; k < 400; ++k) {
      const double a = kTwoPi * turns * k / 400.0 + 0.3 * std::sin(kTwoPi * k / 400.0);
      const double r = 1.0 + 0.5 * std::cos(3.0 * kTwoPi * k / 400.0);
      v.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const int w = degree(v);
    CHECK(w == turns);
    std::vector<Vec2> rotated = v;
    std::rotate(rotated.begin(), rotated.begin() + 123, rotated.end());
    CHECK(degree(rotated) == w);
    std::vector<Vec2> scaled;
    const double s = oracle::uniform(rng, 0.01, 100.0);
    for (const Vec2& z : v) scaled.push_back(s * z);
    CHECK(degree(scaled) == w);
    std::vector<Vec2> reversed(v.rbegin(), v.rend());
    CHECK(degree(reversed) == -w);
  }
}

TEST_CASE("tracked angle of a spiral") {
  auto curve = [](double t) { return Vec2{std::cos(kTwoPi * 2.5 * t), std::sin(kTwoPi * 2.5 * t)}; };
  CHECK(tracked_angle_change(curve, 0.0, 1.0) == doctest::Approx(5.0 * kPi).epsilon(1e-12));
}

TEST_CASE("circle rotation numbers") {
  CHECK(circle_rotation_number([](double x) { return x + 0.35; }, 10) == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(circle_rotation_number([](double x) { return x + 0.35; }, 1000) == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(circle_rotation_number([](double x) { return x; }, 100) == 0.0);
  auto arnold = [](double x) { return x + 0.3 + 0.1 * std::sin(kTwoPi * x); };
  const double a = circle_rotation_number(arnold, 100000);
  const double b = circle_rotation_number(arnold, 200000);
  CHECK(std::abs(a - b) <= 5e-3);
  for (int k : {-2, 1, 3}) {
    auto shifted = [&](double x) { return arnold(x) + k; };
    CHECK(circle_rotation_number(shifted, 5000) == doctest::Approx(circle_rotation_number(arnold, 5000) + k).epsilon(1e-12));
  }
  CHECK_THROWS_AS(circle_rotation_number([](double x) { return 2.0 * x; }, 10), NotALift);
}

TEST_CASE("cover projection and lift") {
  const Vec2 p = cover_project({0.0, -1.0});
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(std::abs(p.y) < 1e-15);
  const CoverPoint q = cover_lift({0.0, 2.0}, 0.0);
  CHECK(q.theta == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q.y == doctest::Approx(-2.0));
  const Vec2 d = cover_project({1.0, -1.0});
  CHECK(d.x == doctest::Approx(1.0));
  CHECK(std::abs(d.y) < 1e-12);
  CHECK_THROWS_AS(cover_lift({0.0, 0.0}), OriginNotInCover);
}

TEST_CASE("lifting a loop gains its winding number") {
  for (int turns : {1, 2, -3}) {
    const std::vector<Vec2> loop = circle(200, turns, 0.7);
    double theta = 0.0;
    for (std::size_t k = 1; k <= loop.size(); ++k) theta = cover_lift(loop[k % loop.size()], theta).theta;
    CHECK(theta == doctest::Approx(double(turns)).epsilon(1e-12));
  }
}
