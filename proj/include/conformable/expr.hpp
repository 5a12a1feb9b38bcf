#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "conformable/dual.hpp"

namespace conformable {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Function { Sin, Cos, Exp, Ln, Abs, Sqrt };

std::string_view function_name(Function fn);

/// Immutable expression tree in the single free variable `t`.
///
/// Nodes are shared between copies, so an Expr is cheap to copy and safe to
/// read from any number of threads.
class Expr {
 public:
  struct Node;

  static Expr constant(double value);
  static Expr variable();
  static Expr call(Function fn, Expr arg);
  static Expr pow(Expr base, Expr exponent);

  NodeKind kind() const;
  /// Literal value; only meaningful for NodeKind::Constant.
  double constant_value() const;
  /// Function tag; only meaningful for NodeKind::Call.
  Function function() const;
  /// Operands. Unary nodes and calls have only `lhs`.
  Expr lhs() const;
  Expr rhs() const;

  /// Structural equality (constants compared bitwise-equal as doubles).
  friend bool operator==(const Expr& x, const Expr& y);

  friend Expr operator+(Expr x, Expr y);
  friend Expr operator-(Expr x, Expr y);
  friend Expr operator*(Expr x, Expr y);
  friend Expr operator/(Expr x, Expr y);
  friend Expr operator-(Expr x);

  const Node& node() const { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(NodeKind kind, Expr lhs, std::optional<Expr> rhs = std::nullopt);

  std::shared_ptr<const Node> node_;
};

/// Parses the expression mini-language:
///
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
///   atom  := NUMBER | 't' | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Throws SyntaxError or UnknownIdentifier.
Expr parse(std::string_view source);

/// Renders with the minimum parentheses needed for parse() to rebuild the same tree.
std::string to_string(const Expr& expr);

/// Plain evaluation at t. Throws DomainError or NonFinite.
double evaluate(const Expr& expr, double t);

/// Value and exact first derivative at t. Throws DomainError, NonFinite or
/// NonDifferentiable.
Dual evaluate_dual(const Expr& expr, double t);

/// A function on [a, inf): an expression body, optionally with the value at
/// the lower terminal shifted by `jump`.
struct FuncSpec {
  Expr body;
  std::optional<double> jump;

  static FuncSpec parse(std::string_view source, std::optional<double> jump = std::nullopt);

  bool has_jump() const { return jump.has_value() && *jump != 0.0; }
  std::string to_string() const;
};

/// f(t) on [a, inf); the jump is applied only when t == a exactly.
/// Throws PreconditionError when t < a.
double eval(const FuncSpec& f, double t, double a);

/// (f(t), f'(t)) of the body. The jump decoration is ignored.
Dual eval_dual(const FuncSpec& f, double t);

}  // namespace conformable
