#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/fixtures.hpp"
#include "torsionlab/rotation.hpp"

using namespace torsionlab;

namespace {

MatrixPath rotation_path(double turns) {
  return [turns](double t) { return Mat2::rotation(kTwoPi * turns * t); };
}

double frac(double v) { return v - std::floor(v); }

double circle_distance(double a, double b) {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

Mat2 random_matrix(std::mt19937_64& rng, double lo, double hi) {
  return {oracle::uniform(rng, lo, hi), oracle::uniform(rng, lo, hi), oracle::uniform(rng, lo, hi),
          oracle::uniform(rng, lo, hi)};
}

}  // namespace

TEST_CASE("linear blow-up rotation examples") {
  CHECK(linear_blowup_rotation(Mat2::rotation(kTwoPi * 0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(linear_blowup_rotation({2, 0, 0, 0.5}) == 0.0);
  CHECK(linear_blowup_rotation({-3, 0, 0, -1.0 / 3}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(linear_blowup_rotation({1, 0, 0, -1}), NotOrientationPreserving);
}

TEST_CASE("random rotations and their iterated rotation numbers") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const double alpha = oracle::uniform(rng, -20.0, 20.0);
    const double expect = frac(alpha / kTwoPi);
    const double got = linear_blowup_rotation(Mat2::rotation(alpha));
    CHECK(circle_distance(got, expect) <= 1e-12);
    CHECK(got >= 0.0);
    CHECK(got < 1.0);
  }
  for (int k = 0; k < 50; ++k) {
    Mat2 a = random_matrix(rng, -2.0, 2.0);
    if (a.det() <= 0.05) continue;
    CHECK(circle_distance(iterated_linear_rotation(a), linear_blowup_rotation(a)) <= 1e-3);
  }
}

TEST_CASE("isotopy blow-up rotation follows the path") {
  CHECK(isotopy_blowup_rotation(rotation_path(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(isotopy_blowup_rotation(rotation_path(1.3)) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(isotopy_blowup_rotation(rotation_path(-0.7)) == doctest::Approx(-0.7).epsilon(1e-12));
  const GenIsotopy g = make_gen_isotopy(ScalarField::from_text("(x^2+y^2)/2"), 0.5, {-1, 1, -1, 1});
  const double along = isotopy_blowup_rotation([&](double t) { return gf_jacobian(g, t, {0, 0}); });
  const double alt = isotopy_blowup_rotation([&](double t) { return gf_alt_jacobian(g, t, {0, 0}); });
  CHECK(along > -1.0);
  CHECK(along < 1.0);
  CHECK(std::abs(along - alt) <= 1e-6);
}

TEST_CASE("a full loop of rotation shifts the lift by one") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 30; ++k) {
    const Mat2 m{oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2), 0.0};
    const Mat2 mt{m.a, m.b, m.c, -m.a};
    const MatrixPath base = [mt](double t) { return oracle::exp_traceless(mt, t); };
    const MatrixPath looped = [mt](double t) { return Mat2::rotation(kTwoPi * t) * oracle::exp_traceless(mt, t); };
    CHECK(isotopy_blowup_rotation(looped) == doctest::Approx(isotopy_blowup_rotation(base) + 1.0).epsilon(1e-9));
  }
}

TEST_CASE("rigid rotation samples are constant") {
  const PlanarIsotopy r = rigid_rotation({0.1, -0.2}, 0.2);
  for (double u : {0.5, 0.1}) {
    for (int n : {1, 3, 10}) {
      const auto samples = rotation_samples(r, {0.1, -0.2}, u, u / 4, n, 16);
      REQUIRE(samples.size() == 16);
      for (const auto& s : samples) CHECK(s.rho == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
  const RotationSetEstimate e = local_rotation_set_estimate(r, {0.1, -0.2}, 0.2, 3, 16, 10.0);
  CHECK(e.lo == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(e.hi == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_FALSE(e.lo_neg_infinite);
  CHECK_FALSE(e.hi_pos_infinite);
}

TEST_CASE("annulus escape: rho_n = -1/y on every kept sample") {
  const Scenario s = load_fixture("ex3_annulus_escape");
  const RotationSetEstimate e = local_rotation_set_estimate(s.isotopy, {0, 0}, 0.05, 3, 16, 10.0);
  CHECK(e.hi_pos_infinite);
  REQUIRE_FALSE(e.samples.empty());
  for (const auto& smp : e.samples) {
    // Plane model: |z| = -y on the cover.
    const double y = -norm(smp.start);
    CHECK(std::abs(smp.rho - (-1.0 / y)) <= 1e-9 * std::abs(1.0 / y));
    CHECK(std::abs(smp.rho) >= 10.0);
  }
  CHECK_THROWS_AS(local_rotation_set_estimate(s.isotopy, {0, 0}, 0.05, 0, 16, 10.0), InvalidArgument);
}

TEST_CASE("torsion-low examples") {
  const TorsionVerdict a = torsion_low_classify(rotation_path(0.25));
  CHECK(a.classification == TorsionClass::TorsionLow);
  CHECK(a.rho == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(a.case_tag == EigenCase::ComplexEigen);
  const TorsionVerdict b = torsion_low_classify(rotation_path(1.25));
  CHECK(b.classification == TorsionClass::NotTorsionLow);
  CHECK(b.rho == doctest::Approx(1.25).epsilon(1e-12));
  const GenIsotopy g = make_gen_isotopy(ScalarField::from_text("x^2-y^2"), 0.5, {-1, 1, -1, 1});
  const TorsionVerdict c = torsion_low_classify([&](double t) { return gf_jacobian(g, t, {0, 0}); });
  CHECK(c.classification == TorsionClass::TorsionLow);
  CHECK(std::abs(c.rho) <= 1e-12);
  CHECK(c.case_tag == EigenCase::PositiveSaddle);
}

TEST_CASE("torsion-low agrees with the eigenvalue trichotomy on exp(tM) paths") {
  std::mt19937_64 rng(31337);
  int done = 0;
  while (done < 500) {
    const double a = oracle::uniform(rng, -4, 4), b = oracle::uniform(rng, -8, 8), c = oracle::uniform(rng, -8, 8);
    const Mat2 m{a, b, c, -a};
    const double q = a * a + b * c;  // -det M
    double expect_rho = 0.0;
    EigenCase expect_case = EigenCase::PositiveSaddle;
    if (q < 0) {
      const double w = std::sqrt(-q);
      if (std::abs(std::sin(w)) < 1e-3) continue;
      expect_rho = (c > 0 ? 1.0 : -1.0) * w / kTwoPi;
      expect_case = EigenCase::ComplexEigen;
    } else if (q < 1e-6) {
      continue;
    }
    const TorsionVerdict v = torsion_low_classify([m](double t) { return oracle::exp_traceless(m, t); });
    CHECK(v.rho == doctest::Approx(expect_rho).epsilon(1e-9).scale(1.0));
    CHECK(v.case_tag == expect_case);
    CHECK(v.classification ==
          (std::abs(expect_rho) < 1.0 ? TorsionClass::TorsionLow : TorsionClass::NotTorsionLow));
    ++done;
  }
}

TEST_CASE("twist check on shears and rotations") {
  const AnnulusLiftMap shear{[](Vec2 z) { return Vec2{z.x + z.y, z.y}; }, 1.0, 1.0, 0.0};
  const TwistReport s = twist_check_and_search(shear);
  CHECK(s.twist_holds);
  CHECK(s.worst_product < 0.0);
  REQUIRE_FALSE(s.fixed_points.empty());
  for (const Vec2& p : s.fixed_points) {
    CHECK(std::abs(p.y) <= 1e-9);
    CHECK(p.x >= 0.0);
    CHECK(p.x < 1.0);
  }
  const AnnulusLiftMap rot{[](Vec2 z) { return Vec2{z.x + 0.3, z.y}; }, 1.0, 1.0, 0.0};
  const TwistReport r = twist_check_and_search(rot);
  CHECK_FALSE(r.twist_holds);
  CHECK(r.worst_product >= 0.0);
  CHECK(r.fixed_points.empty());
  const AnnulusLiftMap band{[](Vec2 z) { return Vec2{z.x + 3 * z.y - 1, z.y}; }, 1.0 / 6, 1.0, 1.0 / 3};
  const TwistReport t = twist_check_and_search(band);
  CHECK(t.twist_holds);
  for (const Vec2& p : t.fixed_points) CHECK(std::abs(p.y - 1.0 / 3) <= 1e-9);
  const AnnulusLiftMap broken{[](Vec2 z) { return Vec2{2 * z.x, z.y}; }, 1.0, 1.0, 0.0};
  CHECK_THROWS_AS(twist_check_and_search(broken), NotALift);
}
