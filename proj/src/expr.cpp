#include "torsionlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

std::shared_ptr<ExprNode> make_node(ExprKind kind) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  return n;
}

Expr wrap(std::shared_ptr<ExprNode> n) { return Expr(std::move(n)); }

Expr binary(ExprKind kind, Expr lhs, Expr rhs) {
  auto n = make_node(kind);
  n->args = {std::move(lhs), std::move(rhs)};
  return wrap(std::move(n));
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Cmp, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
  bool integral = false;
  CompareOp cmp = CompareOp::Less;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token tok;
      tok.offset = pos_;
      if (pos_ >= text_.size()) {
        tok.kind = Tok::End;
        out.push_back(tok);
        return out;
      }
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number(tok);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
          ++end;
        }
        tok.kind = Tok::Ident;
        tok.text = text_.substr(pos_, end - pos_);
        pos_ = end;
      } else {
        lex_symbol(tok);
      }
      out.push_back(tok);
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void lex_number(Token& tok) {
    std::size_t end = pos_;
    bool integral = true;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    if (end < text_.size() && text_[end] == '.') {
      integral = false;
      ++end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        integral = false;
        end = exp;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
    }
    const std::string literal(text_.substr(pos_, end - pos_));
    if (literal == ".") throw SyntaxError("malformed number", pos_);
    char* parse_end = nullptr;
    const double v = std::strtod(literal.c_str(), &parse_end);
    if (parse_end != literal.c_str() + literal.size() || !std::isfinite(v)) {
      throw SyntaxError("malformed number", pos_);
    }
    tok.kind = Tok::Number;
    tok.text = text_.substr(pos_, end - pos_);
    tok.number = v;
    tok.integral = integral;
    pos_ = end;
  }

  void lex_symbol(Token& tok) {
    const char c = text_[pos_];
    const char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
    std::size_t len = 1;
    switch (c) {
      case '+': tok.kind = Tok::Plus; break;
      case '-': tok.kind = Tok::Minus; break;
      case '*': tok.kind = Tok::Star; break;
      case '/': tok.kind = Tok::Slash; break;
      case '^': tok.kind = Tok::Caret; break;
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case ',': tok.kind = Tok::Comma; break;
      case '<':
        tok.kind = Tok::Cmp;
        if (next == '=') {
          tok.cmp = CompareOp::LessEq;
          len = 2;
        } else {
          tok.cmp = CompareOp::Less;
        }
        break;
      case '>':
        tok.kind = Tok::Cmp;
        if (next == '=') {
          tok.cmp = CompareOp::GreaterEq;
          len = 2;
        } else {
          tok.cmp = CompareOp::Greater;
        }
        break;
      case '=':
        if (next != '=') throw SyntaxError("expected '=='", pos_);
        tok.kind = Tok::Cmp;
        tok.cmp = CompareOp::Equal;
        len = 2;
        break;
      case '!':
        if (next != '=') throw SyntaxError("expected '!='", pos_);
        tok.kind = Tok::Cmp;
        tok.cmp = CompareOp::NotEqual;
        len = 2;
        break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }
    tok.text = text_.substr(pos_, len);
    pos_ += len;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

struct FuncInfo {
  std::string_view name;
  Func func;
  int arity;
};

constexpr std::array<FuncInfo, 8> kFuncs{{
    {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1},
    {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},
    {"sqrt", Func::Sqrt, 1},
    {"abs", Func::Abs, 1},
    {"min", Func::Min, 2},
    {"max", Func::Max, 2},
}};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions options)
      : tokens_(std::move(tokens)), options_(options) {}

  Expr parse() {
    if (peek().kind == Tok::End) throw SyntaxError("empty expression", peek().offset);
    Expr e = expr();
    if (peek().kind == Tok::Cmp) {
      throw SyntaxError("comparison outside select()", peek().offset);
    }
    if (peek().kind != Tok::End) throw SyntaxError("unexpected token", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(std::string("expected ") + what, peek().offset);
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const ExprKind kind = take().kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub;
      lhs = binary(kind, lhs, term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const ExprKind kind = take().kind == Tok::Star ? ExprKind::Mul : ExprKind::Div;
      lhs = binary(kind, lhs, unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      auto n = make_node(ExprKind::Neg);
      n->args = {unary()};
      return wrap(std::move(n));
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind != Tok::Caret) return base;
    take();
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      negative = true;
      take();
    }
    const Token& tok = peek();
    if (tok.kind != Tok::Number || !tok.integral || tok.number > 1024.0) {
      throw SyntaxError("integer exponent required", tok.offset);
    }
    take();
    auto n = make_node(ExprKind::Pow);
    n->exponent = static_cast<int>(tok.number) * (negative ? -1 : 1);
    n->args = {std::move(base)};
    if (peek().kind == Tok::Caret) {
      throw SyntaxError("chained '^' needs parentheses", peek().offset);
    }
    return wrap(std::move(n));
  }

  Expr primary() {
    const Token tok = peek();
    switch (tok.kind) {
      case Tok::Number:
        take();
        return Expr::number(tok.number);
      case Tok::LParen: {
        take();
        Expr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        take();
        return identifier(tok);
      default:
        throw SyntaxError("expected operand", tok.offset);
    }
  }

  Expr identifier(const Token& tok) {
    const std::string_view name = tok.text;
    if (name == "x") return Expr::variable(Var::X);
    if (name == "y") return Expr::variable(Var::Y);
    if (name == "t" && options_.allow_t) return Expr::variable(Var::T);
    if (name == "pi") return wrap(make_node(ExprKind::Pi));
    if (name == "select") return select(tok);
    for (const auto& info : kFuncs) {
      if (info.name != name) continue;
      expect(Tok::LParen, "'(' after function name");
      auto n = make_node(ExprKind::Call);
      n->func = info.func;
      n->args.push_back(expr());
      for (int i = 1; i < info.arity; ++i) {
        expect(Tok::Comma, "','");
        n->args.push_back(expr());
      }
      expect(Tok::RParen, "')'");
      return wrap(std::move(n));
    }
    throw UnknownIdentifier("unknown identifier '" + std::string(name) + "' at offset " +
                                std::to_string(tok.offset),
                            {{"identifier", std::string(name)}, {"offset", tok.offset}});
  }

  Expr select(const Token&) {
    expect(Tok::LParen, "'(' after select");
    Expr lhs = expr();
    if (peek().kind != Tok::Cmp) throw SyntaxError("select() needs a comparison", peek().offset);
    auto cmp = make_node(ExprKind::Compare);
    cmp->cmp = take().cmp;
    cmp->args = {std::move(lhs), expr()};
    expect(Tok::Comma, "','");
    Expr a = expr();
    expect(Tok::Comma, "','");
    Expr b = expr();
    expect(Tok::RParen, "')'");
    auto n = make_node(ExprKind::Select);
    n->args = {wrap(std::move(cmp)), std::move(a), std::move(b)};
    return wrap(std::move(n));
  }

  std::vector<Token> tokens_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Shortest form that still round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char trial[64];
    std::snprintf(trial, sizeof trial, "%.*g", prec, v);
    if (std::strtod(trial, nullptr) == v) return trial;
  }
  return buf;
}

const char* func_name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name.data();
  }
  return "?";
}

const char* compare_text(CompareOp op) {
  switch (op) {
    case CompareOp::Less: return "<";
    case CompareOp::LessEq: return "<=";
    case CompareOp::Greater: return ">";
    case CompareOp::GreaterEq: return ">=";
    case CompareOp::Equal: return "==";
    case CompareOp::NotEqual: return "!=";
  }
  return "?";
}

void print(const Expr& e, std::string& out) {
  const ExprNode& n = e.node();
  auto bin = [&](const char* op) {
    out += '(';
    print(n.args[0], out);
    out += op;
    print(n.args[1], out);
    out += ')';
  };
  switch (n.kind) {
    case ExprKind::Number: out += format_number(n.value); break;
    case ExprKind::Variable: out += n.var == Var::X ? "x" : n.var == Var::Y ? "y" : "t"; break;
    case ExprKind::Pi: out += "pi"; break;
    case ExprKind::Add: bin(" + "); break;
    case ExprKind::Sub: bin(" - "); break;
    case ExprKind::Mul: bin(" * "); break;
    case ExprKind::Div: bin(" / "); break;
    case ExprKind::Compare: {
      print(n.args[0], out);
      out += ' ';
      out += compare_text(n.cmp);
      out += ' ';
      print(n.args[1], out);
      break;
    }
    case ExprKind::Neg:
      out += "(-";
      print(n.args[0], out);
      out += ')';
      break;
    case ExprKind::Pow:
      out += '(';
      print(n.args[0], out);
      out += '^';
      out += std::to_string(n.exponent);
      out += ')';
      break;
    case ExprKind::Call:
    case ExprKind::Select:
      out += n.kind == ExprKind::Select ? "select" : func_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(n.args[i], out);
      }
      out += ')';
      break;
  }
}

// ---------------------------------------------------------------------------
// Jet arithmetic

Jet2 constant(double v) { return Jet2{v, {}, 0.0, 0.0, 0.0}; }

Jet2 add(const Jet2& u, const Jet2& v, double sign) {
  return {u.value + sign * v.value, u.grad + sign * v.grad, u.hxx + sign * v.hxx,
          u.hxy + sign * v.hxy, u.hyy + sign * v.hyy};
}

Jet2 mul(const Jet2& u, const Jet2& v) {
  Jet2 r;
  r.value = u.value * v.value;
  r.grad = u.value * v.grad + v.value * u.grad;
  r.hxx = u.value * v.hxx + v.value * u.hxx + 2.0 * u.grad.x * v.grad.x;
  r.hxy = u.value * v.hxy + v.value * u.hxy + u.grad.x * v.grad.y + u.grad.y * v.grad.x;
  r.hyy = u.value * v.hyy + v.value * u.hyy + 2.0 * u.grad.y * v.grad.y;
  return r;
}

/// Composition f(u) given f(u), f'(u), f''(u).
Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
  Jet2 r;
  r.value = f0;
  r.grad = f1 * u.grad;
  r.hxx = f2 * u.grad.x * u.grad.x + f1 * u.hxx;
  r.hxy = f2 * u.grad.x * u.grad.y + f1 * u.hxy;
  r.hyy = f2 * u.grad.y * u.grad.y + f1 * u.hyy;
  return r;
}

bool compare(CompareOp op, double a, double b) {
  switch (op) {
    case CompareOp::Less: return a < b;
    case CompareOp::LessEq: return a <= b;
    case CompareOp::Greater: return a > b;
    case CompareOp::GreaterEq: return a >= b;
    case CompareOp::Equal: return a == b;
    case CompareOp::NotEqual: return a != b;
  }
  return false;
}

[[noreturn]] void domain_error(const Expr& e, const char* what, double x, double y) {
  throw DomainError(std::string(what) + " in " + to_string(e) + " at (" + format_number(x) +
                        ", " + format_number(y) + ")",
                    {{"subexpression", to_string(e)}, {"x", x}, {"y", y}});
}

struct JetEval {
  double x, y, t;

  bool branch(const Expr& cond) const {
    const ExprNode& c = cond.node();
    const double a = eval(c.args[0]).value;
    const double b = eval(c.args[1]).value;
    // On the boundary the first branch wins.
    if (a == b) return true;
    return compare(c.cmp, a, b);
  }

  Jet2 eval(const Expr& e) const {
    const ExprNode& n = e.node();
    switch (n.kind) {
      case ExprKind::Number: return constant(n.value);
      case ExprKind::Pi: return constant(kPi);
      case ExprKind::Variable:
        if (n.var == Var::X) return Jet2{x, {1.0, 0.0}, 0.0, 0.0, 0.0};
        if (n.var == Var::Y) return Jet2{y, {0.0, 1.0}, 0.0, 0.0, 0.0};
        return constant(t);
      case ExprKind::Add: return add(eval(n.args[0]), eval(n.args[1]), 1.0);
      case ExprKind::Sub: return add(eval(n.args[0]), eval(n.args[1]), -1.0);
      case ExprKind::Mul: return mul(eval(n.args[0]), eval(n.args[1]));
      case ExprKind::Div: {
        const Jet2 v = eval(n.args[1]);
        if (v.value == 0.0) domain_error(e, "division by zero", x, y);
        const double inv = 1.0 / v.value;
        return mul(eval(n.args[0]), chain(v, inv, -inv * inv, 2.0 * inv * inv * inv));
      }
      case ExprKind::Neg: return add(constant(0.0), eval(n.args[0]), -1.0);
      case ExprKind::Pow: {
        const Jet2 u = eval(n.args[0]);
        const int k = n.exponent;
        if (k == 0) return constant(1.0);
        if (k < 0 && u.value == 0.0) domain_error(e, "negative power of zero", x, y);
        const double f0 = std::pow(u.value, k);
        const double f1 = k * std::pow(u.value, k - 1);
        const double f2 = k == 1 ? 0.0 : k * (k - 1) * std::pow(u.value, k - 2);
        return chain(u, f0, f1, f2);
      }
      case ExprKind::Call: return call(e);
      case ExprKind::Select:
        return branch(n.args[0]) ? eval(n.args[1]) : eval(n.args[2]);
      case ExprKind::Compare: break;
    }
    domain_error(e, "comparison used as a value", x, y);
  }

  Jet2 call(const Expr& e) const {
    const ExprNode& n = e.node();
    if (n.func == Func::Min || n.func == Func::Max) {
      const Jet2 a = eval(n.args[0]);
      const Jet2 b = eval(n.args[1]);
      if (n.func == Func::Min) return a.value <= b.value ? a : b;
      return a.value >= b.value ? a : b;
    }
    const Jet2 u = eval(n.args[0]);
    const double v = u.value;
    switch (n.func) {
      case Func::Sin: return chain(u, std::sin(v), std::cos(v), -std::sin(v));
      case Func::Cos: return chain(u, std::cos(v), -std::sin(v), -std::cos(v));
      case Func::Exp: {
        const double ev = std::exp(v);
        return chain(u, ev, ev, ev);
      }
      case Func::Log:
        if (v <= 0.0) domain_error(e, "log of nonpositive argument", x, y);
        return chain(u, std::log(v), 1.0 / v, -1.0 / (v * v));
      case Func::Sqrt: {
        if (v <= 0.0) domain_error(e, "sqrt not differentiable at nonpositive argument", x, y);
        const double s = std::sqrt(v);
        return chain(u, s, 0.5 / s, -0.25 / (s * v));
      }
      case Func::Abs:
        return v >= 0.0 ? u : add(constant(0.0), u, -1.0);
      default: break;
    }
    domain_error(e, "unknown function", x, y);
  }
};

struct ValueEval {
  double x, y, t;

  double eval(const Expr& e) const {
    const ExprNode& n = e.node();
    switch (n.kind) {
      case ExprKind::Number: return n.value;
      case ExprKind::Pi: return kPi;
      case ExprKind::Variable: return n.var == Var::X ? x : n.var == Var::Y ? y : t;
      case ExprKind::Add: return eval(n.args[0]) + eval(n.args[1]);
      case ExprKind::Sub: return eval(n.args[0]) - eval(n.args[1]);
      case ExprKind::Mul: return eval(n.args[0]) * eval(n.args[1]);
      case ExprKind::Div: {
        const double d = eval(n.args[1]);
        if (d == 0.0) domain_error(e, "division by zero", x, y);
        return eval(n.args[0]) / d;
      }
      case ExprKind::Neg: return -eval(n.args[0]);
      case ExprKind::Pow: {
        const double u = eval(n.args[0]);
        if (n.exponent < 0 && u == 0.0) domain_error(e, "negative power of zero", x, y);
        return n.exponent == 0 ? 1.0 : std::pow(u, n.exponent);
      }
      case ExprKind::Select: {
        const ExprNode& c = n.args[0].node();
        const double a = eval(c.args[0]);
        const double b = eval(c.args[1]);
        const bool first = a == b || compare(c.cmp, a, b);
        return first ? eval(n.args[1]) : eval(n.args[2]);
      }
      case ExprKind::Call: {
        if (n.func == Func::Min || n.func == Func::Max) {
          const double a = eval(n.args[0]);
          const double b = eval(n.args[1]);
          if (n.func == Func::Min) return a <= b ? a : b;
          return a >= b ? a : b;
        }
        const double v = eval(n.args[0]);
        switch (n.func) {
          case Func::Sin: return std::sin(v);
          case Func::Cos: return std::cos(v);
          case Func::Exp: return std::exp(v);
          case Func::Log:
            if (v <= 0.0) domain_error(e, "log of nonpositive argument", x, y);
            return std::log(v);
          case Func::Sqrt:
            if (v < 0.0) domain_error(e, "sqrt of negative argument", x, y);
            return std::sqrt(v);
          case Func::Abs: return std::abs(v);
          default: break;
        }
        break;
      }
      case ExprKind::Compare: break;
    }
    domain_error(e, "comparison used as a value", x, y);
  }
};

void collect_vars(const Expr& e, std::set<Var>& out) {
  const ExprNode& n = e.node();
  if (n.kind == ExprKind::Variable) out.insert(n.var);
  for (const auto& a : n.args) collect_vars(a, out);
}

}  // namespace

Expr Expr::number(double v) {
  auto n = make_node(ExprKind::Number);
  n->value = v;
  return wrap(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = make_node(ExprKind::Variable);
  n->var = v;
  return wrap(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.root_ == b.root_) return true;
  if (!a.root_ || !b.root_) return false;
  const ExprNode& x = *a.root_;
  const ExprNode& y = *b.root_;
  if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
  switch (x.kind) {
    case ExprKind::Number:
      if (x.value != y.value) return false;
      break;
    case ExprKind::Variable:
      if (x.var != y.var) return false;
      break;
    case ExprKind::Pow:
      if (x.exponent != y.exponent) return false;
      break;
    case ExprKind::Call:
      if (x.func != y.func) return false;
      break;
    case ExprKind::Compare:
      if (x.cmp != y.cmp) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

Expr parse_expr(std::string_view text, ParseOptions options) {
  Parser parser(Lexer(text).run(), options);
  return parser.parse();
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::vector<Var> free_variables(const Expr& e) {
  std::set<Var> vars;
  collect_vars(e, vars);
  return {vars.begin(), vars.end()};
}

Jet2 eval_jet2(const Expr& e, double x, double y, double t) { return JetEval{x, y, t}.eval(e); }

double eval_value(const Expr& e, double x, double y, double t) {
  return ValueEval{x, y, t}.eval(e);
}

}  // namespace torsionlab
