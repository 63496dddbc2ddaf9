#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "torsionlab/builtins.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/genfunc.hpp"

using namespace torsionlab;

namespace {

const Rect kSquare{-1.0, 1.0, -1.0, 1.0};

GenIsotopy gen(const char* text, double c = 0.5) {
  return make_gen_isotopy(ScalarField::from_text(text), c, kSquare);
}

// Small cubic perturbations of a quadratic form; d12 g stays well below 0.9
// on the unit square.
std::string random_gen_text(std::mt19937_64& rng) {
  std::ostringstream os;
  os.precision(17);
  auto u = [&](double lo, double hi) { return oracle::uniform(rng, lo, hi); };
  os << "(" << u(-1, 1) << ")*x^2 + (" << u(-0.2, 0.2) << ")*x*y + (" << u(-1, 1) << ")*y^2 + ("
     << u(-0.1, 0.1) << ")*x^3 + (" << u(-0.1, 0.1) << ")*x*y^2 + (" << u(-0.1, 0.1) << ")*y^3 + ("
     << u(-0.3, 0.3) << ")*sin(x + 2*y)";
  return os.str();
}

}  // namespace

TEST_CASE("gf_apply examples") {
  const GenIsotopy zero = gen("0");
  for (double t : {0.0, 0.3, 1.0}) {
    const Vec2 z = gf_apply(zero, t, {3.0, -2.0});
    CHECK(z == Vec2{3.0, -2.0});
  }
  const Vec2 shear = gf_apply(gen("y^2/2"), 1.0, {0.4, 0.7});
  CHECK(shear.x == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(shear.y == doctest::Approx(0.7).epsilon(1e-12));
  const Vec2 q = gf_apply(gen("x^2+y^2"), 1.0, {1.0, 0.0});
  CHECK(q.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("gf_jacobian examples") {
  const Mat2 id = gf_jacobian(gen("0"), 0.7, {0.2, 0.1});
  CHECK(id == Mat2::identity());
  for (Vec2 z : {Vec2{0.0, 0.0}, Vec2{0.3, -0.8}}) {
    const Mat2 j = gf_jacobian(gen("(x^2+y^2)/2"), 1.0, z);
    CHECK(j.a == doctest::Approx(1.0));
    CHECK(j.b == doctest::Approx(1.0));
    CHECK(j.c == doctest::Approx(-1.0));
    CHECK(std::abs(j.d) < 1e-12);
    CHECK(j.det() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("two-phase isotopy examples") {
  const GenIsotopy half = gen("(x^2+y^2)/2");
  CHECK(gf_alt_apply(gen("x^2*y/8"), 0.0, {0.3, 0.4}) == Vec2{0.3, 0.4});
  const Vec2 mid = gf_alt_apply(half, 0.5, {1.0, 0.0});
  CHECK(mid.x == doctest::Approx(1.0));
  CHECK(std::abs(mid.y) < 1e-15);
  const Vec2 end = gf_alt_apply(half, 1.0, {1.0, 0.0});
  CHECK(end.x == doctest::Approx(1.0));
  CHECK(end.y == doctest::Approx(-1.0));
  const Vec2 quarter = gf_alt_apply(gen("y^2/2"), 0.25, {0.0, 1.0});
  CHECK(quarter.x == doctest::Approx(0.5));
  CHECK(quarter.y == doctest::Approx(1.0));
  // Endpoints agree with the natural isotopy.
  const GenIsotopy g = gen("x^2 - x*y/4 + y^3/3");
  const Vec2 a = gf_alt_apply(g, 1.0, {0.2, -0.3});
  const Vec2 b = gf_apply(g, 1.0, {0.2, -0.3});
  CHECK(norm(a - b) < 1e-12);
}

TEST_CASE("twist bound validation") {
  CHECK_THROWS_AS(gen("x*y", 0.5), TwistBoundViolated);
  CHECK_THROWS_AS(gen("x^2", 1.0), InvalidArgument);
  CHECK_NOTHROW(gen("0.4*x*y", 0.5));
  CHECK(sampled_twist_max(ScalarField::from_text("0.4*x*y"), kSquare) == doctest::Approx(0.4));
}

TEST_CASE("area preservation, orientation and FD agreement on random generating functions") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 500; ++k) {
    const GenIsotopy g = gen(random_gen_text(rng).c_str(), 0.9);
    const double t = oracle::uniform(rng, 0.0, 1.0);
    const Vec2 z{oracle::uniform(rng, -0.8, 0.8), oracle::uniform(rng, -0.8, 0.8)};
    const Mat2 j = gf_jacobian(g, t, z);
    if (!(std::abs(j.det() - 1.0) <= 1e-9)) FAIL_CHECK("det " << j.det() << " case " << k);
    CHECK(j.det() > 0.0);
    if (k < 200) {
      const Mat2 fd = oracle::fd_jacobian([&](Vec2 w) { return gf_apply(g, t, w); }, z);
      const double scale = std::max({1.0, std::abs(fd.a), std::abs(fd.b), std::abs(fd.c), std::abs(fd.d)});
      const double err = std::max({std::abs(j.a - fd.a), std::abs(j.b - fd.b), std::abs(j.c - fd.c),
                                   std::abs(j.d - fd.d)});
      CHECK(err <= 1e-5 * scale);
    }
  }
}

TEST_CASE("solver residuals contract after the second iteration") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const GenIsotopy g = gen(random_gen_text(rng).c_str(), 0.9);
    const GfSolve s = gf_solve(g, oracle::uniform(rng, 0.0, 1.0),
                               {oracle::uniform(rng, -0.8, 0.8), oracle::uniform(rng, -0.8, 0.8)});
    CHECK(s.residual <= 1e-12);
    if (s.bracketed_newton) continue;
    for (std::size_t i = 2; i < s.residuals.size(); ++i) CHECK(s.residuals[i] <= s.residuals[i - 1]);
  }
  CHECK(gf_apply(gen("x^2+y^2"), 0.0, {0.25, -0.125}) == Vec2{0.25, -0.125});
}

TEST_CASE("critical points of quadratic forms") {
  const auto mins = find_critical_points(gen("x^2+y^2"), kSquare, 64);
  REQUIRE(mins.size() == 1);
  CHECK(norm(mins[0].location) < 1e-12);
  CHECK(mins[0].morse_type == MorseType::Min);
  const auto saddles = find_critical_points(gen("x^2-y^2"), kSquare, 64);
  REQUIRE(saddles.size() == 1);
  CHECK(saddles[0].morse_type == MorseType::Saddle);
  CHECK(classify_hessian({-2.0, 0.0, 0.0, -1.0}) == MorseType::Max);
  CHECK(classify_hessian({1e-5, 0.0, 0.0, 1e-5}) == MorseType::Degenerate);
  CHECK_THROWS_AS(find_critical_points(gen("x^2"), kSquare, 4), InvalidArgument);
}

TEST_CASE("critical points are the fixed points of the time-one map") {
  const GenIsotopy g = gen("x^2 - y^2 + x^3/5");
  for (const auto& c : find_critical_points(g, kSquare, 64)) {
    CHECK(norm(gf_apply(g, 1.0, c.location) - c.location) < 1e-10);
  }
  // A non-critical point moves.
  CHECK(norm(gf_apply(g, 1.0, {0.5, 0.5}) - Vec2{0.5, 0.5}) > 0.1);
}

TEST_CASE("sin^2 generating function: saddles at (0, 1/m)") {
  const GenIsotopy g = make_gen_isotopy(builtin::sin2_generating_function(), 0.75, {-0.6, 0.6, 0.05, 0.95});
  const auto pts = find_critical_points(g, {-0.6, 0.6, 0.05, 0.95}, 400);
  for (int m : {2, 3, 4}) {
    const CriticalPoint* hit = nullptr;
    for (const auto& c : pts) {
      if (norm(c.location - Vec2{0.0, 1.0 / m}) <= 1e-6) hit = &c;
    }
    REQUIRE_MESSAGE(hit != nullptr, "missing (0, 1/" << m << ")");
    // The Hessian is degenerate here: d22 g vanishes at y = 1/m.
    CHECK(hit->morse_type == MorseType::Degenerate);
    CHECK(hit->gradient_residual <= 1e-9);
  }
}
