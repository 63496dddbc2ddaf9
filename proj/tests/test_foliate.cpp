#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "torsionlab/builtins.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/foliate.hpp"
#include "torsionlab/genfunc.hpp"
#include "torsionlab/geom.hpp"

using namespace torsionlab;

namespace {

Foliation grad(const char* text) { return gradient_foliation(ScalarField::from_text(text)); }

// phi written out independently of the library.
double phi(double s) { return 19000.0 * std::pow(s, 14) * std::pow(1.0 - s, 4) * (0.75 - s); }

}  // namespace

TEST_CASE("gradient directions") {
  const Vec2 z{0.3, -0.7};
  const Vec2 a = grad("x^2+y^2").direction(z);
  CHECK(a.x == doctest::Approx(0.6));
  CHECK(a.y == doctest::Approx(-1.4));
  const Vec2 b = grad("x^2-y^2").direction(z);
  CHECK(b.x == doctest::Approx(0.6));
  CHECK(b.y == doctest::Approx(1.4));
}

TEST_CASE("sin^2 generating function gradient matches its closed-form partials") {
  const Foliation f = gradient_foliation(builtin::sin2_generating_function());
  std::mt19937_64 rng(42);
  for (int k = 0; k < 200; ++k) {
    const double x = oracle::uniform(rng, -1.0, 1.0);
    const double y = oracle::uniform(rng, 0.05, 0.999);
    const double big_phi = oracle::simpson(phi, 0.0, y, 2000);
    const double sx = std::sin(kPi * x);
    const double gx = kPi * std::sin(kTwoPi * x) * big_phi;
    const double gy = y * std::pow(std::sin(kPi / y), 2) + phi(y) * sx * sx;
    const Vec2 d = f.direction({x, y});
    CHECK(std::abs(d.x - gx) <= 1e-8);
    CHECK(std::abs(d.y - gy) <= 1e-8);
  }
}

TEST_CASE("leaves of radial fields") {
  const Leaf out = integrate_leaf(grad("x^2+y^2"), {1.0, 0.0}, 0.01, 1.0, 0.01);
  CHECK(out.stop == LeafStop::MaxLength);
  for (const Vec2& v : out.vertices) CHECK(std::abs(v.y) < 1e-12);
  CHECK(out.vertices.back().x == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(out.arclength.back() == doctest::Approx(1.0).epsilon(1e-9));

  const Leaf in = integrate_leaf(grad("-(x^2+y^2)"), {1.0, 0.0}, 0.01, 5.0, 0.01);
  CHECK(in.stop == LeafStop::Singular);
  CHECK(norm(in.vertices.back()) <= 0.011);
  CHECK(in.vertices.back().x > 0.0);

  const Leaf boxed = integrate_leaf(grad("x^2+y^2"), {0.5, 0.5}, 0.01, 5.0, 0.01, Rect{-1, 1, -1, 1});
  CHECK(boxed.stop == LeafStop::DomainExit);
  CHECK_THROWS_AS(integrate_leaf(grad("x^2+y^2"), {0.0, 0.0}, 0.01, 1.0, 0.01), StartsSingular);
}

TEST_CASE("two-phase trajectory of (x^2+y^2)/2 is transverse with min_det 2") {
  const GenIsotopy g = make_gen_isotopy(ScalarField::from_text("(x^2+y^2)/2"), 0.5, {-2, 2, -2, 2});
  const ParamPath p = sample_path([&](double t) { return gf_alt_apply(g, t, {1.0, 0.0}); }, 0.0, 1.0, 64);
  const TransversalityReport r = transversality_report(p, gradient_foliation(g.g));
  CHECK(r.verdict == TransverseVerdict::PositivelyTransverse);
  CHECK(r.min_det == doctest::Approx(2.0).epsilon(1e-6));
  // Doubling the sample density keeps the verdict.
  const ParamPath fine = sample_path([&](double t) { return gf_alt_apply(g, t, {1.0, 0.0}); }, 0.0, 1.0, 128);
  CHECK(transversality_report(fine, gradient_foliation(g.g)).verdict == TransverseVerdict::PositivelyTransverse);
}

TEST_CASE("a leaf is tangent to its own foliation") {
  const Foliation f = grad("x^2+y^2");
  const Leaf leaf = integrate_leaf(f, {0.3, 0.2}, 0.005, 0.5, 1e-3);
  ParamPath p;
  for (std::size_t i = 0; i < leaf.vertices.size(); ++i) {
    p.params.push_back(leaf.arclength[i]);
    p.points.push_back(leaf.vertices[i]);
  }
  const TransversalityReport r = transversality_report(p, f);
  CHECK(r.verdict == TransverseVerdict::Tangent);
  CHECK(std::abs(r.min_det) < 1e-12);
  ParamPath still;
  still.params = {0.0, 1.0};
  still.points = {{0.3, 0.2}, {0.3, 0.2}};
  CHECK_THROWS_AS(transversality_report(still, f), AllStationary);
}

TEST_CASE("quadrant flow crosses xi positively") {
  const Foliation xi{builtin::quadrant_transverse, 1e-10, "xi"};
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Vec2 z{oracle::uniform(rng, -1.0, 1.0), oracle::uniform(rng, -1.0, 1.0)};
    if (norm(z) < 1e-3) continue;
    CHECK(cross(builtin::quadrant_velocity(z), builtin::quadrant_transverse(z)) > 0.0);
    const ParamPath p = sample_path([&](double t) { return builtin::quadrant_flow(t, z); }, 0.0, 1.0, 64);
    const TransversalityReport r = transversality_report(p, xi);
    CHECK(r.verdict == TransverseVerdict::PositivelyTransverse);
  }
}

TEST_CASE("singularity classes") {
  const SingularityReport sink = classify_singularity(grad("-(x^2+y^2)"), {0, 0}, 0.5);
  CHECK(sink.cls == SingularityClass::Sink);
  CHECK(sink.foliation_index == 1);
  const SingularityReport source = classify_singularity(grad("x^2+y^2"), {0, 0}, 0.5);
  CHECK(source.cls == SingularityClass::Source);
  const SingularityReport saddle = classify_singularity(grad("x^2-y^2"), {0, 0}, 1.0);
  CHECK(saddle.cls == SingularityClass::Saddle);
  std::vector<Vec2> field;
  for (int k = 0; k < 256; ++k) {
    const double a = kTwoPi * k / 256;
    field.push_back({2 * std::cos(a), -2 * std::sin(a)});
  }
  CHECK(saddle.foliation_index == winding_number(build_winding_path(field, true)));
  // Pure rotation: radial part vanishes, no guess.
  const Foliation center = expression_foliation(parse_expr("-y"), parse_expr("x"));
  CHECK(classify_singularity(center, {0, 0}, 0.5).cls == SingularityClass::Unknown);
  CHECK_THROWS_AS(classify_singularity(grad("(x^2+y^2-1/4)^2"), {0, 0}, 0.5), SingularOnCircle);
}

TEST_CASE("reversal swaps sink and source only") {
  for (const char* g : {"x^2+y^2", "-(x^2+y^2)", "x^2-y^2", "x^3-3*x*y^2"}) {
    const Foliation f = grad(g);
    const SingularityReport a = classify_singularity(f, {0, 0}, 0.5);
    const SingularityReport b = classify_singularity(reversed(f), {0, 0}, 0.5);
    CHECK(a.foliation_index == b.foliation_index);
    if (a.cls == SingularityClass::Sink) CHECK(b.cls == SingularityClass::Source);
    if (a.cls == SingularityClass::Source) CHECK(b.cls == SingularityClass::Sink);
    if (a.cls == SingularityClass::Saddle) CHECK(b.cls == SingularityClass::Saddle);
  }
}

TEST_CASE("gradient index agrees with the Morse type") {
  for (const char* g : {"x^2+y^2", "-(x^2+3*y^2)", "x^2-y^2", "x*y + x^2/4", "-x^2 + x*y/2 + y^2"}) {
    const auto pts = find_critical_points(ScalarField::from_text(g), {-1, 1, -1, 1}, 32);
    REQUIRE(pts.size() == 1);
    const int idx = classify_singularity(grad(g), pts[0].location, 0.3).foliation_index;
    CHECK(idx == (pts[0].morse_type == MorseType::Saddle ? -1 : 1));
  }
}
