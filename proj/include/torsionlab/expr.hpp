#pragma once

// Scalar expressions in x, y (optionally t) with second-order forward
// differentiation.
//
// Grammar (lowest to highest precedence):
//   expr       := term (('+' | '-') term)*
//   term       := unary (('*' | '/') unary)*
//   unary      := '-' unary | power
//   power      := primary ('^' ['-'] INTEGER)?
//   primary    := NUMBER | 'x' | 'y' | 't' | 'pi' | '(' expr ')'
//               | f1 '(' expr ')' | f2 '(' expr ',' expr ')'
//               | 'select' '(' comparison ',' expr ',' expr ')'
//   comparison := expr ('<' | '<=' | '>' | '>=' | '==' | '!=') expr
//   f1         := sin | cos | exp | log | sqrt | abs
//   f2         := min | max
//
// Comparisons appear only as the first argument of select().

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "torsionlab/linalg.hpp"

namespace torsionlab {

enum class ExprKind {
  Number,
  Variable,
  Pi,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,
  Call,
  Select,
  Compare,
};

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Min, Max };
enum class CompareOp { Less, LessEq, Greater, GreaterEq, Equal, NotEqual };
enum class Var { X, Y, T };

struct ExprNode;

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  const ExprNode& node() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  static Expr number(double v);
  static Expr variable(Var v);

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> root_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double value = 0.0;            // Number
  Var var = Var::X;              // Variable
  int exponent = 0;              // Pow
  Func func = Func::Sin;         // Call
  CompareOp cmp = CompareOp::Less;  // Compare
  std::vector<Expr> args;
};

/// Second-order jet of a scalar function of (x, y).
struct Jet2 {
  double value = 0.0;
  Vec2 grad{};
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;

  Mat2 hessian() const { return {hxx, hxy, hxy, hyy}; }
};

struct ParseOptions {
  bool allow_t = false;
};

Expr parse_expr(std::string_view text, ParseOptions options = {});

/// Fully parenthesised rendering; parse_expr(to_string(e)) == e.
std::string to_string(const Expr& e);

/// Variables occurring in e.
std::vector<Var> free_variables(const Expr& e);

/// Value, gradient and Hessian in (x, y); t is held fixed.
Jet2 eval_jet2(const Expr& e, double x, double y, double t = 0.0);

/// Plain value. Unlike eval_jet2, sqrt(0) and abs are allowed anywhere.
double eval_value(const Expr& e, double x, double y, double t = 0.0);

}  // namespace torsionlab
