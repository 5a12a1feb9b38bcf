#pragma once

#include <functional>

#include "conformable/core.hpp"
#include "conformable/expr.hpp"

namespace conformable {

struct QuadConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [lo, hi]: the panel
/// with the largest |K15 - G7| is bisected until the summed error meets
/// max(abs_tol, rel_tol * |value|). Panels are summed left to right.
///
/// A panel whose bisection changes neither the value nor the error is taken
/// to be at the integrand's rounding floor and is not refined again; its error
/// still counts toward the reported estimate. Throws ConvergenceError when
/// max_subdivisions is exhausted or that floor exceeds sqrt(rel_tol).
QuadResult integrate_adaptive(const std::function<double(double)>& g, double lo, double hi,
                              const QuadConfig& cfg);

/// Conformable integral of order alpha from a to t:
///   I f(t) = int_a^t (s-a)^(alpha-1) f(s) ds.
/// The endpoint singularity is removed with u = (s-a)^alpha, which leaves the
/// bounded integrand f(a + u^(1/alpha)) / alpha on [0, (t-a)^alpha]. The body
/// is used throughout; a jump at a is a single point and does not contribute.
EvalResult integral(const FuncSpec& f, Order alpha, Terminal a, double t, const QuadConfig& cfg = {});

/// int_{t1}^{t2} (s-a)^(alpha-1) f(s) ds for a < t1, t2 (signed; no singularity).
EvalResult integral_between(const FuncSpec& f, Order alpha, Terminal a, double t1, double t2,
                            const QuadConfig& cfg = {});

/// T I f(t): the limit derivative of the running integral at t. The
/// difference I f(t+h) - I f(t) is integrated directly over [t, t+h].
EvalResult t_of_i(const FuncSpec& f, Order alpha, Terminal a, double t, const QuadConfig& cfg,
                  const LimitSchedule& sched);
EvalResult t_of_i(const FuncSpec& f, Order alpha, Terminal a, double t);

/// I T f(t): integral of the closed-form derivative from a to t.
///
/// The result equals f(t) - f(a+). It does not exist when f(a+) does not
/// exist or is infinite, or when f is not alpha-differentiable on (a, t].
/// The integral is improper at a and is taken as the limit of the integral
/// over [a + eps, t], extrapolated along eps = eps0 * 2^-k.
/// The terminal mode is accepted for symmetry with the derivative API; the
/// integral never samples the terminal itself, so both modes agree.
EvalResult i_of_t(const FuncSpec& f, Order alpha, Terminal a, double t, TerminalMode mode,
                  const QuadConfig& cfg = {});

/// lim_{s->a+} f(s) of the body, on the mesh a + 1e-2 * 2^-k.
EvalResult right_limit(const FuncSpec& f, Terminal a, const LimitSchedule& sched);

}  // namespace conformable
