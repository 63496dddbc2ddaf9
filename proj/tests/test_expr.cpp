#include <doctest.h>

#include <cstring>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/expr.hpp"

using namespace torsionlab;

namespace {

bool is_var(const Expr& e, Var v) {
  return e.node().kind == ExprKind::Variable && e.node().var == v;
}

// Random polynomial of degree <= 4 as text.
std::string random_polynomial(std::mt19937_64& rng) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; i + j <= 4; ++j) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
      const double c = oracle::uniform(rng, -2.0, 2.0);
      if (!first) os << " + ";
      first = false;
      os << "(" << c << ")";
      if (i) os << "*x^" << i;
      if (j) os << "*y^" << j;
    }
  }
  if (first) os << "x*y";
  return os.str();
}

}  // namespace

TEST_CASE("parse: sum of squares") {
  const Expr e = parse_expr("x^2+y^2");
  REQUIRE(e.node().kind == ExprKind::Add);
  const Expr& l = e.node().args[0];
  const Expr& r = e.node().args[1];
  CHECK(l.node().kind == ExprKind::Pow);
  CHECK(l.node().exponent == 2);
  CHECK(is_var(l.node().args[0], Var::X));
  CHECK(r.node().kind == ExprKind::Pow);
  CHECK(is_var(r.node().args[0], Var::Y));
}

TEST_CASE("parse: annulus lift coordinate x-(1/y)") {
  const Expr e = parse_expr("x-(1/y)");
  REQUIRE(e.node().kind == ExprKind::Sub);
  CHECK(is_var(e.node().args[0], Var::X));
  const Expr& d = e.node().args[1];
  REQUIRE(d.node().kind == ExprKind::Div);
  CHECK(d.node().args[0].node().kind == ExprKind::Number);
  CHECK(d.node().args[0].node().value == 1.0);
  CHECK(is_var(d.node().args[1], Var::Y));
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse_expr("sin(2*");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 6);
  }
  CHECK_THROWS_AS(parse_expr("x + z"), UnknownIdentifier);
  CHECK_THROWS_AS(parse_expr("t*x"), UnknownIdentifier);
  CHECK_NOTHROW(parse_expr("t*x", ParseOptions{true}));
  CHECK_THROWS_AS(parse_expr("x < y"), SyntaxError);
  CHECK_THROWS_AS(parse_expr("x^1.5"), SyntaxError);
}

TEST_CASE("round trip through to_string") {
  for (const char* text : {"x^2+y^2", "x-(1/y)", "-x^-2*sin(pi*y)", "select(x<=y, min(x,y), max(x, y)^3)",
                           "exp(-x)*log(1+y^2)/sqrt(2+x*y)"}) {
    const Expr e = parse_expr(text);
    CHECK(parse_expr(to_string(e)) == e);
  }
}

TEST_CASE("jet of x^2+y^2 at (1,2)") {
  const Jet2 j = eval_jet2(parse_expr("x^2+y^2"), 1.0, 2.0);
  CHECK(j.value == 5.0);
  CHECK(j.grad.x == 2.0);
  CHECK(j.grad.y == 4.0);
  CHECK(j.hxx == 2.0);
  CHECK(j.hxy == 0.0);
  CHECK(j.hyy == 2.0);
}

TEST_CASE("mixed partial of x*y") {
  CHECK(eval_jet2(parse_expr("x*y"), 3.0, 5.0).hxy == 1.0);
}

TEST_CASE("y sin(pi/y)^2 against finite differences") {
  const Expr e = parse_expr("y*sin(pi/y)^2");
  auto f = [&](double x, double y) { return eval_value(e, x, y); };
  for (double x : {-0.7, 0.0, 0.3}) {
    const Jet2 j = eval_jet2(e, x, 0.5);
    CHECK(std::abs(j.value) < 1e-15);
    const auto fd = oracle::fd_jet(f, x, 0.5, 1e-6);
    CHECK(j.grad.x == doctest::Approx(fd.gx).epsilon(1e-6));
    CHECK(std::abs(j.grad.y - fd.gy) < 1e-6);
  }
}

TEST_CASE("select takes the first branch on the boundary") {
  const Expr e = parse_expr("select(x < 0, x^2, 3*x)");
  CHECK(eval_jet2(e, 0.0, 0.0).grad.x == 0.0);
  CHECK(eval_jet2(e, 1e-3, 0.0).grad.x == 3.0);
  CHECK(eval_jet2(e, -1e-3, 0.0).grad.x == doctest::Approx(-2e-3));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval_jet2(parse_expr("1/x"), 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse_expr("log(x)"), -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(eval_jet2(parse_expr("sqrt(x)"), 0.0, 1.0), DomainError);
  CHECK(eval_value(parse_expr("sqrt(x)"), 0.0, 1.0) == 0.0);
}

TEST_CASE("random polynomials: jets match central differences") {
  std::mt19937_64 rng(20240611);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const Expr e = parse_expr(random_polynomial(rng));
    const double x = oracle::uniform(rng, -1.5, 1.5);
    const double y = oracle::uniform(rng, -1.5, 1.5);
    auto f = [&](double a, double b) { return eval_value(e, a, b); };
    const auto fd = oracle::fd_jet(f, x, y);
    const Jet2 j = eval_jet2(e, x, y);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-4 * std::max(1.0, std::abs(b)); };
    const bool ok = close(j.grad.x, fd.gx) && close(j.grad.y, fd.gy) && close(j.hxx, fd.hxx) &&
                    close(j.hxy, fd.hxy) && close(j.hyy, fd.hyy);
    if (!ok) FAIL_CHECK("mismatch for " << to_string(e) << " at " << x << ", " << y);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("jets are bitwise deterministic") {
  const Expr e = parse_expr("sin(x*y)^3 + exp(-x^2)/(1+y^2) - sqrt(2+cos(y))");
  const Jet2 a = eval_jet2(e, 0.123, -0.456);
  const Jet2 b = eval_jet2(e, 0.123, -0.456);
  CHECK(std::memcmp(&a, &b, sizeof(Jet2)) == 0);
}
