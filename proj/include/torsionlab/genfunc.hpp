#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/expr.hpp"
#include "torsionlab/linalg.hpp"

namespace torsionlab {

/// Twice differentiable g(x, y) evaluated as a second-order jet.
class ScalarField {
 public:
  using JetFn = std::function<Jet2(double, double)>;

  static ScalarField from_expr(Expr e);
  static ScalarField from_text(std::string_view text);
  static ScalarField custom(std::string description, JetFn fn);

  Jet2 jet(Vec2 z) const { return fn_(z.x, z.y); }
  const std::string& description() const { return description_; }
  const std::optional<Expr>& expr() const { return expr_; }

 private:
  ScalarField(std::string description, JetFn fn, std::optional<Expr> expr)
      : description_(std::move(description)), fn_(std::move(fn)), expr_(std::move(expr)) {}

  std::string description_;
  JetFn fn_;
  std::optional<Expr> expr_;
};

/// The isotopy (f_t) where f_t is the map generated by t*g:
///   X - x = t d2g(X, y),  Y - y = -t d1g(X, y).
struct GenIsotopy {
  ScalarField g;
  double twist_bound_c = 0.5;
  double solver_tol = 1e-12;
  int solver_max_iter = 200;
};

/// Validates c < 1 and samples d12g on a 64x64 grid over `region`; a sampled
/// value above c throws TwistBoundViolated.
GenIsotopy make_gen_isotopy(ScalarField g, double twist_bound_c, const Rect& region);

/// Largest sampled d12g on an n x n grid of `region`.
double sampled_twist_max(const ScalarField& g, const Rect& region, int n = 64);

struct GfSolve {
  double X = 0.0;
  double Y = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool bracketed_newton = false;  // fixed-point iteration stalled and was replaced
  std::vector<double> residuals;  // residual before each update
};

/// Solves the implicit equations for f_t(z). Plain iteration
/// X <- x + t d2g(X, y) from X = x; when that fails to contract the monotone
/// equation is finished by bracketed Newton. Throws SolverDiverged.
GfSolve gf_solve(const GenIsotopy& iso, double t, Vec2 z);

Vec2 gf_apply(const GenIsotopy& iso, double t, Vec2 z);

/// Closed-form Jacobian of f_t at z (det = 1).
Mat2 gf_jacobian(const GenIsotopy& iso, double t, Vec2 z);

/// Two-phase isotopy: horizontal to (X, y) for t <= 1/2, then vertical to (X, Y).
Vec2 gf_alt_apply(const GenIsotopy& iso, double t, Vec2 z);
Mat2 gf_alt_jacobian(const GenIsotopy& iso, double t, Vec2 z);

enum class MorseType { Min, Max, Saddle, Degenerate };

const char* to_string(MorseType m);

struct CriticalPoint {
  Vec2 location;
  double gradient_residual = 0.0;
  Mat2 hessian;
  MorseType morse_type = MorseType::Degenerate;
};

MorseType classify_hessian(const Mat2& hessian);

/// Newton on grad g from grid seeds (sign-change cells and discrete minima
/// of |grad g|). Only points inside `region` are reported; completeness is
/// relative to the grid resolution.
std::vector<CriticalPoint> find_critical_points(const ScalarField& g, const Rect& region,
                                                int grid_n);
std::vector<CriticalPoint> find_critical_points(const GenIsotopy& iso, const Rect& region,
                                                int grid_n);

}  // namespace torsionlab
