#include "conformable/expr.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "conformable/errors.hpp"

namespace conformable {

struct Expr::Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  Function fn = Function::Sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  bool depends_on_t = false;
};

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Exp: return "exp";
    case Function::Ln: return "ln";
    case Function::Abs: return "abs";
    case Function::Sqrt: return "sqrt";
  }
  return "?";
}

Expr Expr::constant(double value) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::Constant;
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::variable() {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::Variable;
  node->depends_on_t = true;
  return Expr(std::move(node));
}

Expr Expr::make(NodeKind kind, Expr lhs, std::optional<Expr> rhs) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->depends_on_t = lhs.node_->depends_on_t || (rhs && rhs->node_->depends_on_t);
  node->lhs = std::move(lhs.node_);
  if (rhs) node->rhs = std::move(rhs->node_);
  return Expr(std::move(node));
}

Expr Expr::call(Function fn, Expr arg) {
  auto node = std::make_shared<Node>();
  node->kind = NodeKind::Call;
  node->fn = fn;
  node->depends_on_t = arg.node_->depends_on_t;
  node->lhs = std::move(arg.node_);
  return Expr(std::move(node));
}

Expr Expr::pow(Expr base, Expr exponent) {
  return make(NodeKind::Pow, std::move(base), std::move(exponent));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
Function Expr::function() const { return node_->fn; }
Expr Expr::lhs() const { return Expr(node_->lhs); }
Expr Expr::rhs() const { return Expr(node_->rhs); }

Expr operator+(Expr x, Expr y) { return Expr::make(NodeKind::Add, std::move(x), std::move(y)); }
Expr operator-(Expr x, Expr y) { return Expr::make(NodeKind::Sub, std::move(x), std::move(y)); }
Expr operator*(Expr x, Expr y) { return Expr::make(NodeKind::Mul, std::move(x), std::move(y)); }
Expr operator/(Expr x, Expr y) { return Expr::make(NodeKind::Div, std::move(x), std::move(y)); }
Expr operator-(Expr x) { return Expr::make(NodeKind::Neg, std::move(x)); }

namespace {

using Node = Expr::Node;

bool same_tree(const Node* x, const Node* y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NodeKind::Constant: return x->value == y->value || (std::isnan(x->value) && std::isnan(y->value));
    case NodeKind::Variable: return true;
    case NodeKind::Call: return x->fn == y->fn && same_tree(x->lhs.get(), y->lhs.get());
    default: return same_tree(x->lhs.get(), y->lhs.get()) && same_tree(x->rhs.get(), y->rhs.get());
  }
}

// ---- printing --------------------------------------------------------------

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

void format_number(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, end);
}

void print(std::string& out, const Node& n);

void print_wrapped(std::string& out, const Node& n, bool parens) {
  if (parens) out += '(';
  print(out, n);
  if (parens) out += ')';
}

void print(std::string& out, const Node& n) {
  switch (n.kind) {
    case NodeKind::Constant:
      if (std::signbit(n.value)) {
        out += '(';
        format_number(out, n.value);
        out += ')';
      } else {
        format_number(out, n.value);
      }
      return;
    case NodeKind::Variable: out += 't'; return;
    case NodeKind::Call:
      out += function_name(n.fn);
      print_wrapped(out, *n.lhs, true);
      return;
    case NodeKind::Neg:
      out += '-';
      print_wrapped(out, *n.lhs, precedence(*n.lhs) < 3);
      return;
    case NodeKind::Pow:
      print_wrapped(out, *n.lhs, precedence(*n.lhs) < 5);
      out += '^';
      print_wrapped(out, *n.rhs, precedence(*n.rhs) < 3);
      return;
    default: {
      const int p = precedence(n);
      const char* op = n.kind == NodeKind::Add   ? " + "
                       : n.kind == NodeKind::Sub ? " - "
                       : n.kind == NodeKind::Mul ? " * "
                                                 : " / ";
      print_wrapped(out, *n.lhs, precedence(*n.lhs) < p);
      out += op;
      print_wrapped(out, *n.rhs, precedence(*n.rhs) <= p);
      return;
    }
  }
}

// ---- real evaluation --------------------------------------------------------

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFinite(std::string("non-finite result in ") + what);
  return v;
}

bool is_integer(double v) { return std::nearbyint(v) == v; }

double real_pow(double x, double y) {
  if (x < 0.0 && !is_integer(y)) throw DomainError("negative base raised to a non-integer power");
  if (x == 0.0 && y < 0.0) throw DomainError("zero raised to a negative power");
  return std::pow(x, y);
}

double apply(Function fn, double x) {
  switch (fn) {
    case Function::Sin: return std::sin(x);
    case Function::Cos: return std::cos(x);
    case Function::Exp: return std::exp(x);
    case Function::Ln:
      if (x <= 0.0) throw DomainError("ln of a non-positive value");
      return std::log(x);
    case Function::Abs: return std::fabs(x);
    case Function::Sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
  }
  return 0.0;
}

double eval_node(const Node& n, double t) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return t;
    case NodeKind::Add: return checked(eval_node(*n.lhs, t) + eval_node(*n.rhs, t), "+");
    case NodeKind::Sub: return checked(eval_node(*n.lhs, t) - eval_node(*n.rhs, t), "-");
    case NodeKind::Mul: return checked(eval_node(*n.lhs, t) * eval_node(*n.rhs, t), "*");
    case NodeKind::Div: {
      const double num = eval_node(*n.lhs, t);
      const double den = eval_node(*n.rhs, t);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case NodeKind::Pow: return checked(real_pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t)), "^");
    case NodeKind::Neg: return -eval_node(*n.lhs, t);
    case NodeKind::Call: return checked(apply(n.fn, eval_node(*n.lhs, t)), function_name(n.fn).data());
  }
  return 0.0;
}

// ---- dual evaluation --------------------------------------------------------

Dual checked(Dual d, const char* what) {
  if (!std::isfinite(d.value) || !std::isfinite(d.deriv))
    throw NonFinite(std::string("non-finite value or derivative in ") + what);
  return d;
}

Dual dual_pow(Dual x, Dual y, bool exponent_varies) {
  if (exponent_varies) {
    if (x.value <= 0.0) throw DomainError("non-positive base raised to a variable power");
    const double v = std::pow(x.value, y.value);
    return {v, v * (y.deriv * std::log(x.value) + y.value * x.deriv / x.value)};
  }
  const double p = y.value;
  if (x.value > 0.0 || (x.value < 0.0 && is_integer(p))) {
    return {std::pow(x.value, p), p * std::pow(x.value, p - 1.0) * x.deriv};
  }
  if (x.value < 0.0) throw DomainError("negative base raised to a non-integer power");
  // Base is exactly zero.
  if (p < 0.0) throw DomainError("zero raised to a negative power");
  if (p == 0.0) return {1.0, 0.0};
  if (p == 1.0) return {0.0, x.deriv};
  if (p > 1.0) return {0.0, 0.0};
  throw NonDifferentiable("fractional power of zero has no finite derivative");
}

Dual apply(Function fn, Dual x) {
  switch (fn) {
    case Function::Sin: return {std::sin(x.value), std::cos(x.value) * x.deriv};
    case Function::Cos: return {std::cos(x.value), -std::sin(x.value) * x.deriv};
    case Function::Exp: {
      const double e = std::exp(x.value);
      return {e, e * x.deriv};
    }
    case Function::Ln:
      if (x.value <= 0.0) throw DomainError("ln of a non-positive value");
      return {std::log(x.value), x.deriv / x.value};
    case Function::Abs:
      if (x.value == 0.0) {
        // |g| with g(t0) = g'(t0) = 0 is o(h), hence differentiable with slope 0.
        if (x.deriv == 0.0) return {0.0, 0.0};
        throw NonDifferentiable("abs has no derivative where its argument crosses zero");
      }
      return {std::fabs(x.value), x.value > 0.0 ? x.deriv : -x.deriv};
    case Function::Sqrt:
      if (x.value < 0.0) throw DomainError("sqrt of a negative value");
      if (x.value == 0.0) throw NonDifferentiable("sqrt has no finite derivative at zero");
      {
        const double r = std::sqrt(x.value);
        return {r, x.deriv / (2.0 * r)};
      }
  }
  return {};
}

Dual eval_dual_node(const Node& n, double t) {
  if (!n.depends_on_t) return Dual::constant(eval_node(n, t));
  switch (n.kind) {
    case NodeKind::Constant: return Dual::constant(n.value);
    case NodeKind::Variable: return Dual::variable(t);
    case NodeKind::Add: return checked(eval_dual_node(*n.lhs, t) + eval_dual_node(*n.rhs, t), "+");
    case NodeKind::Sub: return checked(eval_dual_node(*n.lhs, t) - eval_dual_node(*n.rhs, t), "-");
    case NodeKind::Mul: return checked(eval_dual_node(*n.lhs, t) * eval_dual_node(*n.rhs, t), "*");
    case NodeKind::Div: {
      const Dual num = eval_dual_node(*n.lhs, t);
      const Dual den = eval_dual_node(*n.rhs, t);
      if (den.value == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case NodeKind::Pow:
      return checked(dual_pow(eval_dual_node(*n.lhs, t), eval_dual_node(*n.rhs, t), n.rhs->depends_on_t),
                     "^");
    case NodeKind::Neg: return -eval_dual_node(*n.lhs, t);
    case NodeKind::Call: return checked(apply(n.fn, eval_dual_node(*n.lhs, t)), function_name(n.fn).data());
  }
  return {};
}

}  // namespace

bool operator==(const Expr& x, const Expr& y) { return same_tree(x.node_.get(), y.node_.get()); }

std::string to_string(const Expr& expr) {
  std::string out;
  print(out, expr.node());
  return out;
}

double evaluate(const Expr& expr, double t) { return eval_node(expr.node(), t); }

Dual evaluate_dual(const Expr& expr, double t) { return eval_dual_node(expr.node(), t); }

FuncSpec FuncSpec::parse(std::string_view source, std::optional<double> jump) {
  return FuncSpec{conformable::parse(source), jump};
}

std::string FuncSpec::to_string() const {
  std::string out = conformable::to_string(body);
  if (has_jump()) {
    out += " [jump ";
    format_number(out, *jump);
    out += " at a]";
  }
  return out;
}

double eval(const FuncSpec& f, double t, double a) {
  if (t < a) throw PreconditionError("evaluation point lies left of the lower terminal");
  const double v = evaluate(f.body, t);
  if (t == a && f.has_jump()) return checked(v + *f.jump, "jump");
  return v;
}

Dual eval_dual(const FuncSpec& f, double t) { return evaluate_dual(f.body, t); }

}  // namespace conformable
