#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "conformable/expr.hpp"

namespace conformable {

/// Fractional order alpha in (0, 1].
class Order {
 public:
  explicit Order(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// Lower terminal a of the operator (finite).
class Terminal {
 public:
  explicit Terminal(double a);
  double value() const noexcept { return a_; }

 private:
  double a_;
};

enum class TerminalMode {
  Original,   ///< value at a is the right limit of interior derivatives
  Corrected,  ///< value at a exists iff the right first derivative exists; f'(a) for alpha = 1, else 0
};

std::string_view to_string(TerminalMode mode);
TerminalMode parse_mode(std::string_view text);

/// Step control for the theta -> 0 limit.
struct LimitSchedule {
  double theta0 = 1e-2;
  double shrink = 0.5;
  int levels = 12;
  double cauchy_tol = 1e-8;
  double divergence_cap = 1e12;

  /// Defaults with theta0 scaled by max(1, |t - a|).
  static LimitSchedule for_point(double a, double t);

  /// Throws PreconditionError unless every field is in range and the finest
  /// step stays above sqrt(machine epsilon) * max(1, |t|).
  void validate(double t) const;
};

/// Value with an error estimate, or a detected nonexistence.
class EvalResult {
 public:
  static EvalResult value_of(double value, double error_estimate);
  static EvalResult does_not_exist(std::string reason);

  bool exists() const noexcept { return std::holds_alternative<Value>(outcome_); }
  /// Throws PreconditionError when the result does not exist.
  double value() const;
  double error_estimate() const;
  /// Empty when the result exists.
  const std::string& reason() const;

 private:
  struct Value {
    double v;
    double err;
  };
  struct Missing {
    std::string reason;
  };
  explicit EvalResult(std::variant<Value, Missing> o) : outcome_(std::move(o)) {}

  std::variant<Value, Missing> outcome_;
};

enum class Method { Limit, ClosedForm };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// x^p for x > 0 computed as exp(p * ln x).
double positive_power(double x, double p);

/// F(t + step) - F(t) for a signed step.
using Increment = std::function<double(double step)>;

/// Limit of (F(t + theta (t-a)^(1-alpha)) - F(t)) / theta over theta -> 0 from
/// both sides, where `increment` supplies the numerator.
EvalResult deriv_limit(const Increment& increment, Order alpha, Terminal a, double t,
                       const LimitSchedule& sched);

/// Limit-definition derivative at an interior point t > a.
EvalResult deriv_limit(const FuncSpec& f, Order alpha, Terminal a, double t, const LimitSchedule& sched);
EvalResult deriv_limit(const FuncSpec& f, Order alpha, Terminal a, double t);

/// (t - a)^(1 - alpha) f'(t) with f' from dual numbers. Does not exist where f
/// has no first derivative.
EvalResult deriv_closed_form(const FuncSpec& f, Order alpha, Terminal a, double t);

/// Derivative at t = a under the chosen terminal semantics.
EvalResult deriv_at_terminal(const FuncSpec& f, Order alpha, Terminal a, TerminalMode mode,
                             const LimitSchedule& sched);
EvalResult deriv_at_terminal(const FuncSpec& f, Order alpha, Terminal a, TerminalMode mode);

/// Right first derivative lim_{h->0+} (f(a+h) - f(a)) / h, jump included.
EvalResult right_derivative(const FuncSpec& f, Terminal a, const LimitSchedule& sched);

/// Converts T^beta f(t) into T^alpha f(t) = (t-a)^(beta-alpha) T^beta f(t).
double order_convert(double value, Order alpha, Order beta, Terminal a, double t);

/// Derivative at any t >= a: terminal semantics at t == a, `method` elsewhere.
/// For t > a the mode has no influence on the result.
EvalResult derivative(const FuncSpec& f, Order alpha, Terminal a, double t, TerminalMode mode,
                      Method method);

}  // namespace conformable
