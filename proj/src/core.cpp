#include "conformable/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "conformable/errors.hpp"
#include "conformable/limits.hpp"

namespace conformable {

Order::Order(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in (0,1]");
}

Terminal::Terminal(double a) : a_(a) {
  if (!std::isfinite(a)) throw PreconditionError("lower terminal must be finite");
}

std::string_view to_string(TerminalMode mode) {
  return mode == TerminalMode::Original ? "original" : "corrected";
}

TerminalMode parse_mode(std::string_view text) {
  if (text == "original") return TerminalMode::Original;
  if (text == "corrected") return TerminalMode::Corrected;
  throw PreconditionError("mode must be 'original' or 'corrected'");
}

std::string_view to_string(Method method) { return method == Method::Limit ? "limit" : "closed"; }

Method parse_method(std::string_view text) {
  if (text == "limit") return Method::Limit;
  if (text == "closed") return Method::ClosedForm;
  throw PreconditionError("method must be 'limit' or 'closed'");
}

LimitSchedule LimitSchedule::for_point(double a, double t) {
  LimitSchedule s;
  s.theta0 = 1e-2 * std::max(1.0, std::fabs(t - a));
  return s;
}

void LimitSchedule::validate(double t) const {
  if (!(theta0 > 0.0)) throw PreconditionError("theta0 must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw PreconditionError("shrink must lie in (0,1)");
  if (levels < 3) throw PreconditionError("at least 3 levels are required");
  if (!(cauchy_tol > 0.0)) throw PreconditionError("cauchy_tol must be positive");
  if (!(divergence_cap > 0.0)) throw PreconditionError("divergence_cap must be positive");
  const double finest = theta0 * std::pow(shrink, levels);
  const double floor = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::fabs(t));
  if (!(finest > floor)) throw PreconditionError("finest step would fall into rounding noise");
}

EvalResult EvalResult::value_of(double value, double error_estimate) {
  return EvalResult(Value{value, std::max(0.0, error_estimate)});
}

EvalResult EvalResult::does_not_exist(std::string reason) { return EvalResult(Missing{std::move(reason)}); }

double EvalResult::value() const {
  if (const auto* v = std::get_if<Value>(&outcome_)) return v->v;
  throw PreconditionError("result does not exist: " + std::get<Missing>(outcome_).reason);
}

double EvalResult::error_estimate() const {
  if (const auto* v = std::get_if<Value>(&outcome_)) return v->err;
  return 0.0;
}

const std::string& EvalResult::reason() const {
  static const std::string empty;
  if (const auto* m = std::get_if<Missing>(&outcome_)) return m->reason;
  return empty;
}

double positive_power(double x, double p) {
  if (!(x > 0.0)) throw PreconditionError("power base must be positive");
  return std::exp(p * std::log(x));
}

namespace {

void require_interior(double a, double t) {
  if (!(t > a)) throw PreconditionError("t must exceed the lower terminal a");
}

}  // namespace

EvalResult deriv_limit(const Increment& increment, Order alpha, Terminal a, double t,
                       const LimitSchedule& sched) {
  require_interior(a.value(), t);
  sched.validate(t);

  const double dist = t - a.value();
  const double weight = positive_power(dist, 1.0 - alpha.value());
  // Keep every probe t + theta*weight inside (a, inf): |theta|*weight <= dist/2.
  const double theta0 = std::min(sched.theta0, 0.5 * positive_power(dist, alpha.value()));

  const auto n = static_cast<std::size_t>(sched.levels);
  std::vector<double> plus(n), minus(n), central(n);
  double theta = theta0;
  for (std::size_t k = 0; k < n; ++k, theta *= sched.shrink) {
    plus[k] = increment(theta * weight) / theta;
    minus[k] = increment(-theta * weight) / -theta;
    for (double q : {plus[k], minus[k]}) {
      if (!std::isfinite(q) || std::fabs(q) > sched.divergence_cap)
        return EvalResult::does_not_exist("difference quotients diverge");
    }
    central[k] = 0.5 * (plus[k] + minus[k]);
  }

  const auto right = limits::richardson(plus, sched.shrink, 1);
  const auto left = limits::richardson(minus, sched.shrink, 1);
  const auto mid = limits::richardson(central, sched.shrink, 2);

  const double scale = std::max(1.0, std::fabs(mid.value));
  const double side_tol = std::sqrt(sched.cauchy_tol) * scale;
  if (right.error > side_tol || left.error > side_tol)
    return EvalResult::does_not_exist("one-sided difference quotients do not converge");
  if (std::fabs(right.value - left.value) > side_tol + right.error + left.error)
    return EvalResult::does_not_exist("left and right limits disagree");

  const double tol = sched.cauchy_tol * scale;
  if (mid.error <= tol) return EvalResult::value_of(mid.value, mid.error);

  // Symmetric extrapolation assumes an even expansion; fall back to the
  // one-sided limits when f' has a kink at t.
  const double avg = 0.5 * (right.value + left.value);
  const double err = std::max({right.error, left.error, 0.5 * std::fabs(right.value - left.value)});
  if (err <= tol) return EvalResult::value_of(avg, err);
  return EvalResult::does_not_exist("difference quotients are not Cauchy within tolerance");
}

EvalResult deriv_limit(const FuncSpec& f, Order alpha, Terminal a, double t, const LimitSchedule& sched) {
  require_interior(a.value(), t);
  const double ft = eval(f, t, a.value());
  const double av = a.value();
  return deriv_limit([&](double step) { return eval(f, t + step, av) - ft; }, alpha, a, t, sched);
}

EvalResult deriv_limit(const FuncSpec& f, Order alpha, Terminal a, double t) {
  return deriv_limit(f, alpha, a, t, LimitSchedule::for_point(a.value(), t));
}

EvalResult deriv_closed_form(const FuncSpec& f, Order alpha, Terminal a, double t) {
  require_interior(a.value(), t);
  Dual d;
  try {
    d = eval_dual(f, t);
  } catch (const NonDifferentiable& e) {
    return EvalResult::does_not_exist(e.what());
  }
  return EvalResult::value_of(positive_power(t - a.value(), 1.0 - alpha.value()) * d.deriv, 0.0);
}

EvalResult right_derivative(const FuncSpec& f, Terminal a, const LimitSchedule& sched) {
  sched.validate(a.value());
  const double av = a.value();
  const double fa = eval(f, av, av);
  std::vector<double> q;
  q.reserve(static_cast<std::size_t>(sched.levels));
  double h = sched.theta0;
  for (int k = 0; k < sched.levels; ++k, h *= sched.shrink) {
    // Quotient over the representable step, not the nominal one.
    const double s = av + h;
    q.push_back((eval(f, s, av) - fa) / (s - av));
  }
  const auto lim = limits::geometric_limit(q, sched.shrink, sched.cauchy_tol, sched.divergence_cap);
  if (!lim.exists) return EvalResult::does_not_exist("right first derivative does not exist: " + lim.reason);
  return EvalResult::value_of(lim.value, lim.error);
}

EvalResult deriv_at_terminal(const FuncSpec& f, Order alpha, Terminal a, TerminalMode mode,
                             const LimitSchedule& sched) {
  if (mode == TerminalMode::Corrected) {
    const EvalResult rd = right_derivative(f, a, sched);
    if (!rd.exists()) return rd;
    if (alpha.value() == 1.0) return rd;
    return EvalResult::value_of(0.0, 0.0);
  }

  sched.validate(a.value());
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(sched.levels));
  double h = sched.theta0;
  for (int k = 0; k < sched.levels; ++k, h *= sched.shrink) {
    const EvalResult inner = deriv_closed_form(f, alpha, a, a.value() + h);
    if (!inner.exists())
      return EvalResult::does_not_exist("not alpha-differentiable near the terminal: " + inner.reason());
    g.push_back(inner.value());
  }
  const auto lim = limits::geometric_limit(g, sched.shrink, sched.cauchy_tol, sched.divergence_cap);
  if (!lim.exists)
    return EvalResult::does_not_exist("interior derivatives have no right limit: " + lim.reason);
  return EvalResult::value_of(lim.value, lim.error);
}

EvalResult deriv_at_terminal(const FuncSpec& f, Order alpha, Terminal a, TerminalMode mode) {
  return deriv_at_terminal(f, alpha, a, mode, LimitSchedule::for_point(a.value(), a.value()));
}

double order_convert(double value, Order alpha, Order beta, Terminal a, double t) {
  require_interior(a.value(), t);
  return positive_power(t - a.value(), beta.value() - alpha.value()) * value;
}

EvalResult derivative(const FuncSpec& f, Order alpha, Terminal a, double t, TerminalMode mode,
                      Method method) {
  if (t < a.value()) throw PreconditionError("t must not lie left of the lower terminal a");
  if (t == a.value()) return deriv_at_terminal(f, alpha, a, mode);
  return method == Method::Limit ? deriv_limit(f, alpha, a, t) : deriv_closed_form(f, alpha, a, t);
}

}  // namespace conformable
