#include "conformable/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "conformable/errors.hpp"
#include "conformable/limits.hpp"

namespace conformable {

namespace {

// Kronrod 15-point abscissae (descending, last is the centre) and weights;
// the 7-point Gauss rule uses the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool settled = false;
};

Panel gauss_kronrod(const std::function<double(double)>& g, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(centre);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = g(centre - dx) + g(centre + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half), false};
}

void require_interior(double a, double t) {
  if (!(t > a)) throw PreconditionError("t must exceed the lower terminal a");
}

}  // namespace

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw PreconditionError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw PreconditionError("max_subdivisions must be at least 1");
}

QuadResult integrate_adaptive(const std::function<double(double)>& g, double lo, double hi,
                              const QuadConfig& cfg) {
  cfg.validate();
  if (lo == hi) return {};

  // Panels stay ordered by position so the final sum runs left to right.
  std::vector<Panel> panels{gauss_kronrod(g, lo, hi)};
  int subdivisions = 0;
  while (true) {
    double total = 0.0;
    double error = 0.0;
    double active_error = 0.0;
    std::size_t worst = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      error += panels[i].error;
      if (panels[i].settled) continue;
      active_error += panels[i].error;
      if (worst == panels.size() || panels[i].error > panels[worst].error) worst = i;
    }
    if (!std::isfinite(total)) throw NonFinite("integrand produced a non-finite sum");
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total));
    if (error <= tol) return {total, error, subdivisions};
    if (active_error <= tol) {
      // What remains is rounding noise in the integrand itself.
      if (error - active_error <= std::sqrt(cfg.rel_tol) * std::max(1.0, std::fabs(total)))
        return {total, error, subdivisions};
      throw ConvergenceError("quadrature limited by roundoff in the integrand");
    }
    if (subdivisions >= cfg.max_subdivisions)
      throw ConvergenceError("quadrature tolerances not met within " + std::to_string(cfg.max_subdivisions) +
                             " subdivisions");

    const Panel p = panels[worst];
    const double mid = 0.5 * (p.lo + p.hi);
    if (mid == p.lo || mid == p.hi) {
      panels[worst].settled = true;
      continue;
    }
    Panel left = gauss_kronrod(g, p.lo, mid);
    Panel right = gauss_kronrod(g, mid, p.hi);
    // Bisection that neither changes the value nor shrinks the error is
    // chasing noise; stop refining there.
    const double joined = left.value + right.value;
    if (left.error + right.error >= 0.99 * p.error && std::fabs(joined - p.value) <= 1e-5 * std::fabs(joined)) {
      left.settled = true;
      right.settled = true;
    }
    panels[worst] = left;
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, right);
    ++subdivisions;
  }
}

EvalResult integral(const FuncSpec& f, Order alpha, Terminal a, double t, const QuadConfig& cfg) {
  const double av = a.value();
  require_interior(av, t);
  const double al = alpha.value();
  const double upper = al == 1.0 ? t - av : positive_power(t - av, al);
  auto integrand = [&](double u) {
    const double offset = al == 1.0 ? u : (u > 0.0 ? std::exp(std::log(u) / al) : 0.0);
    return evaluate(f.body, av + offset) / al;
  };
  const QuadResult r = integrate_adaptive(integrand, 0.0, upper, cfg);
  return EvalResult::value_of(r.value, r.error);
}

EvalResult integral_between(const FuncSpec& f, Order alpha, Terminal a, double t1, double t2,
                            const QuadConfig& cfg) {
  const double av = a.value();
  require_interior(av, t1);
  require_interior(av, t2);
  const double al = alpha.value();
  auto integrand = [&](double s) {
    const double kernel = al == 1.0 ? 1.0 : positive_power(s - av, al - 1.0);
    return kernel * evaluate(f.body, s);
  };
  const QuadResult r = integrate_adaptive(integrand, t1, t2, cfg);
  return EvalResult::value_of(r.value, r.error);
}

EvalResult t_of_i(const FuncSpec& f, Order alpha, Terminal a, double t, const QuadConfig& cfg,
                  const LimitSchedule& sched) {
  require_interior(a.value(), t);
  auto increment = [&](double step) {
    QuadConfig local = cfg;
    local.abs_tol = cfg.abs_tol * std::fabs(step);
    local.rel_tol = 1e-13;
    return integral_between(f, alpha, a, t, t + step, local).value();
  };
  return deriv_limit(increment, alpha, a, t, sched);
}

EvalResult t_of_i(const FuncSpec& f, Order alpha, Terminal a, double t) {
  return t_of_i(f, alpha, a, t, QuadConfig{}, LimitSchedule::for_point(a.value(), t));
}

EvalResult right_limit(const FuncSpec& f, Terminal a, const LimitSchedule& sched) {
  const double av = a.value();
  sched.validate(av);
  std::vector<double> values;
  double h = sched.theta0;
  for (int k = 0; k < sched.levels; ++k, h *= sched.shrink) values.push_back(evaluate(f.body, av + h));
  const auto lim = limits::geometric_limit(values, sched.shrink, sched.cauchy_tol, sched.divergence_cap);
  if (!lim.exists) return EvalResult::does_not_exist("right limit of f at a does not exist: " + lim.reason);
  return EvalResult::value_of(lim.value, lim.error);
}

EvalResult i_of_t(const FuncSpec& f, Order alpha, Terminal a, double t, TerminalMode /*mode*/,
                  const QuadConfig& cfg) {
  const double av = a.value();
  require_interior(av, t);
  const LimitSchedule mesh = LimitSchedule::for_point(av, av);
  const EvalResult lim = right_limit(f, a, mesh);
  if (!lim.exists()) return lim;

  const double al = alpha.value();
  auto to_u = [&](double offset) { return al == 1.0 ? offset : positive_power(offset, al); };
  auto integrand = [&](double u) {
    const double offset = al == 1.0 ? u : std::exp(std::log(u) / al);
    const double s = av + offset;
    const double weight = al == 1.0 ? 1.0 : positive_power(s - av, 1.0 - al);
    return weight * eval_dual(f, s).deriv / al;
  };

  // Improper at a: integrate down to a + eps0, then take the limit of the
  // pieces over [a + eps0 2^-(k+1), a + eps0 2^-k]. Offsets stay well above
  // the spacing of doubles near a, so s - a is resolved accurately.
  const double eps0 = std::min(0.5 * (t - av), 1e-3 * std::max(1.0, std::fabs(av)));
  try {
    const QuadResult main = integrate_adaptive(integrand, to_u(eps0), to_u(t - av), cfg);

    QuadConfig piece_cfg = cfg;
    piece_cfg.abs_tol = cfg.abs_tol / mesh.levels;
    piece_cfg.rel_tol = std::min(cfg.rel_tol, 1e-12);
    std::vector<double> partial;
    double sum = 0.0;
    double piece_err = 0.0;
    double hi = eps0;
    for (int k = 0; k < mesh.levels; ++k, hi *= 0.5) {
      const QuadResult piece = integrate_adaptive(integrand, to_u(0.5 * hi), to_u(hi), piece_cfg);
      sum += piece.value;
      piece_err += piece.error;
      partial.push_back(sum);
    }
    const auto tail = limits::geometric_limit(partial, 0.5, cfg.rel_tol, mesh.divergence_cap);
    if (!tail.exists) return EvalResult::does_not_exist("improper integral does not converge at a: " + tail.reason);
    return EvalResult::value_of(main.value + tail.value, main.error + piece_err + tail.error);
  } catch (const NonDifferentiable& e) {
    return EvalResult::does_not_exist(std::string("integrand is not alpha-differentiable on (a,t]: ") +
                                      e.what());
  }
}

}  // namespace conformable
