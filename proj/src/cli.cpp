#include "conformable/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "conformable/core.hpp"
#include "conformable/errors.hpp"
#include "conformable/quad.hpp"
#include "conformable/registry.hpp"
#include "conformable/verify.hpp"

namespace conformable::cli {

namespace {

// Everything a single evaluation needs; sweeps vary one field.
struct Point {
  std::string expr;
  std::optional<double> jump;
  double alpha = 1.0;
  double a = 0.0;
  double t = 1.0;
  std::string mode = "corrected";
  std::string method = "closed";
  std::string compose = "none";
  QuadConfig quad;
};

void add_point_options(CLI::App* cmd, Point& p, bool need_t = true) {
  cmd->add_option("--expr", p.expr, "expression in t, e.g. \"(t-1)^0.4\"")->required();
  cmd->add_option("--alpha", p.alpha, "order in (0,1]")->required();
  cmd->add_option("--a", p.a, "lower terminal")->required();
  auto* t = cmd->add_option("--t", p.t, "evaluation point (t >= a)");
  if (need_t) t->required();
  cmd->add_option("--jump", p.jump, "value added to f at t = a only");
}

void add_deriv_options(CLI::App* cmd, Point& p) {
  cmd->add_option("--mode", p.mode, "terminal semantics")
      ->check(CLI::IsMember({"original", "corrected"}))
      ->capture_default_str();
  cmd->add_option("--method", p.method, "route for t > a")
      ->check(CLI::IsMember({"limit", "closed"}))
      ->capture_default_str();
}

void add_quad_options(CLI::App* cmd, Point& p) {
  cmd->add_option("--abs-tol", p.quad.abs_tol, "absolute quadrature tolerance")->capture_default_str();
  cmd->add_option("--rel-tol", p.quad.rel_tol, "relative quadrature tolerance")->capture_default_str();
  cmd->add_option("--max-subdivisions", p.quad.max_subdivisions, "panel budget")->capture_default_str();
  cmd->add_option("--compose", p.compose, "none: I f; ti: T(I f); it: I(T f)")
      ->check(CLI::IsMember({"none", "ti", "it"}))
      ->capture_default_str();
}

EvalResult eval_deriv(const Point& p) {
  const FuncSpec f = FuncSpec::parse(p.expr, p.jump);
  return derivative(f, Order(p.alpha), Terminal(p.a), p.t, parse_mode(p.mode), parse_method(p.method));
}

EvalResult eval_integ(const Point& p) {
  const FuncSpec f = FuncSpec::parse(p.expr, p.jump);
  const Order o(p.alpha);
  const Terminal a(p.a);
  if (p.compose == "ti") return t_of_i(f, o, a, p.t, p.quad, LimitSchedule::for_point(p.a, p.t));
  if (p.compose == "it") return i_of_t(f, o, a, p.t, parse_mode(p.mode), p.quad);
  return integral(f, o, a, p.t, p.quad);
}

std::string shortest(double x) { return format_number(x); }

std::string digits17(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// Runs `fn` and maps the outcome to a line and an exit code.
template <class Fn>
int report_single(Fn&& fn, std::ostream& out, std::ostream& err) {
  try {
    const EvalResult r = fn();
    if (!r.exists()) {
      out << "does-not-exist reason=" << r.reason() << '\n';
      return kDoesNotExist;
    }
    out << "value=" << shortest(r.value()) << " err=" << shortest(r.error_estimate()) << '\n';
    return kOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

struct Sweep {
  std::string var = "alpha";
  std::string op = "deriv";
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
  std::string out_path;
};

int run_sweep(const Sweep& s, const Point& base, std::ostream& out, std::ostream& err) {
  if (!(s.start < s.stop)) {
    err << "error: sweep needs start < stop\n";
    return kUsage;
  }
  if (s.steps < 2) {
    err << "error: sweep needs at least 2 steps\n";
    return kUsage;
  }
  if (s.var == "alpha" && !(s.start > 0.0 && s.stop <= 1.0)) {
    err << "error: alpha sweep must stay inside (0,1]\n";
    return kUsage;
  }
  if (s.var == "t" && s.start < base.a) {
    err << "error: t sweep must start at or right of a\n";
    return kUsage;
  }
  try {
    FuncSpec::parse(base.expr, base.jump);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!s.out_path.empty()) {
    file.open(s.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << s.out_path << '\n';
      return kUsage;
    }
    sink = &file;
  }

  *sink << "param,value,err,status\n";
  const int n = s.steps;
  for (int i = 0; i < n; ++i) {
    // Weighted form keeps both endpoints exact.
    const double x = (s.start * (n - 1 - i) + s.stop * i) / (n - 1);
    Point p = base;
    (s.var == "alpha" ? p.alpha : p.t) = x;
    std::string value, error, status;
    try {
      const EvalResult r = s.op == "deriv" ? eval_deriv(p) : eval_integ(p);
      if (r.exists()) {
        value = digits17(r.value());
        error = digits17(r.error_estimate());
        status = "ok";
      } else {
        status = "dne";
      }
    } catch (const Error&) {
      status = "error";
    }
    *sink << digits17(x) << ',' << value << ',' << error << ',' << status << '\n';
  }
  sink->flush();
  if (!*sink) {
    err << "error: failed writing CSV\n";
    return kUsage;
  }
  return kOk;
}

int run_verify(const std::string& json_path, const std::string& mode, std::ostream& out, std::ostream& err) {
  std::vector<TerminalMode> modes;
  if (mode == "both" || mode == "original") modes.push_back(TerminalMode::Original);
  if (mode == "both" || mode == "corrected") modes.push_back(TerminalMode::Corrected);
  const VerificationReport report = run_all(modes);
  out << summary_table(report);
  if (!json_path.empty()) {
    std::ofstream file(json_path, std::ios::binary);
    file << to_json(report);
    file.flush();
    if (!file) {
      err << "error: cannot write " << json_path << '\n';
      return kUsage;
    }
  }
  return matches_expected(report) ? kOk : kVerifyMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformable derivative and integral evaluation, sweeps and verification", "conformable"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "conformable 0.1.0");

  Point dp;
  auto* deriv = app.add_subcommand("deriv", "conformable derivative T^alpha_a f(t)");
  add_point_options(deriv, dp);
  add_deriv_options(deriv, dp);

  Point ip;
  auto* integ = app.add_subcommand("integ", "conformable integral I^alpha_a f(t) and its compositions");
  add_point_options(integ, ip);
  add_quad_options(integ, ip);
  integ->add_option("--mode", ip.mode, "terminal semantics (compose it)")
      ->check(CLI::IsMember({"original", "corrected"}))
      ->capture_default_str();

  Point sp;
  Sweep sw;
  auto* sweep = app.add_subcommand("sweep", "evaluate over a range of alpha or t, CSV output");
  sweep->add_option("--var", sw.var, "swept parameter")->check(CLI::IsMember({"alpha", "t"}))->capture_default_str();
  sweep->add_option("--op", sw.op, "operator")->check(CLI::IsMember({"deriv", "integ"}))->capture_default_str();
  sweep->add_option("--start", sw.start, "first value")->required();
  sweep->add_option("--stop", sw.stop, "last value")->required();
  sweep->add_option("--steps", sw.steps, "number of rows (>= 2)")->required();
  sweep->add_option("--out", sw.out_path, "write CSV here instead of stdout");
  sweep->add_option("--expr", sp.expr, "expression in t")->required();
  sweep->add_option("--alpha", sp.alpha, "order (fixed unless swept)");
  sweep->add_option("--a", sp.a, "lower terminal")->required();
  sweep->add_option("--t", sp.t, "evaluation point (fixed unless swept)");
  sweep->add_option("--jump", sp.jump, "value added to f at t = a only");
  add_deriv_options(sweep, sp);
  sweep->add_option("--compose", sp.compose, "integ only: none, ti or it")
      ->check(CLI::IsMember({"none", "ti", "it"}))
      ->capture_default_str();

  std::string json_path;
  std::string vmode = "both";
  auto* verify = app.add_subcommand("verify", "run every theorem check and the checklist for both modes");
  verify->add_option("--json", json_path, "write the full report as JSON");
  verify->add_option("--mode", vmode, "restrict to one mode")
      ->check(CLI::IsMember({"original", "corrected", "both"}))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*deriv) return report_single([&] { return eval_deriv(dp); }, out, err);
  if (*integ) return report_single([&] { return eval_integ(ip); }, out, err);
  if (*sweep) return run_sweep(sw, sp, out, err);
  return run_verify(json_path, vmode, out, err);
}

}  // namespace conformable::cli
