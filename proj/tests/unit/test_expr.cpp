#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "conformable/errors.hpp"
#include "conformable/expr.hpp"
#include "conformable/registry.hpp"
#include "doctest.h"

using namespace conformable;

TEST_SUITE("expr") {
  TEST_CASE("canonical parses") {
    const Expr t = Expr::variable();
    CHECK(parse("t^2") == Expr::pow(t, Expr::constant(2)));
    CHECK(parse("2*t + sin(t)") == Expr::constant(2) * t + Expr::call(Function::Sin, t));
    CHECK(parse("  t  ") == t);
    CHECK(parse(".5") == Expr::constant(0.5));
    CHECK(parse("1e-3") == Expr::constant(1e-3));
  }

  TEST_CASE("precedence and associativity") {
    const Expr t = Expr::variable();
    const Expr two = Expr::constant(2);
    const Expr three = Expr::constant(3);
    // power binds tighter than unary minus
    CHECK(parse("-t^2") == -Expr::pow(t, two));
    // right-associative power
    CHECK(parse("2^3^t") == Expr::pow(two, Expr::pow(three, t)));
    CHECK(parse("t^-2") == Expr::pow(t, -two));
    CHECK(parse("t-2-3") == (t - two) - three);
    CHECK(parse("t/2*3") == (t / two) * three);
    CHECK(parse("t+2*3") == t + two * three);
    CHECK(parse("pow(t, 2)") == Expr::pow(t, two));
  }

  TEST_CASE("syntax errors carry offset and expected set") {
    try {
      parse("t +");
      FAIL("no throw");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 3);
      CHECK(std::find(e.expected().begin(), e.expected().end(), "'t'") != e.expected().end());
    }
    try {
      parse("(t");
      FAIL("no throw");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 2);
      CHECK(e.expected() == std::vector<std::string>{"')'"});
    }
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("2t"), SyntaxError);
    CHECK_THROWS_AS(parse("t $ 2"), SyntaxError);
    CHECK_THROWS_AS(parse("sin t"), SyntaxError);
    CHECK_THROWS_AS(parse("pow(t)"), SyntaxError);
  }

  TEST_CASE("unknown identifiers") {
    try {
      parse("t + x");
      FAIL("no throw");
    } catch (const UnknownIdentifier& e) {
      CHECK(e.name() == "x");
      CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("tan(t)"), UnknownIdentifier);
  }

  TEST_CASE("printing round-trips for hand-written sources") {
    for (const char* src : {"t^2", "-t^2", "(-t)^2", "2^3^t", "(2^3)^t", "t-(2-3)", "t/(2*3)", "-(t+1)",
                            "--t", "sin(t)^2", "exp(-t)", "t^-0.5", "(t-1)^0.4", "abs(t-2)", "ln(1+(t-1))",
                            "1/(2/t)", "-t*-t", "sqrt(t)*cos(t)/exp(t)", "0.1+0.2"}) {
      CAPTURE(src);
      const Expr e = parse(src);
      CHECK(parse(to_string(e)) == e);
    }
  }

  TEST_CASE("printing round-trips for random trees") {
    std::mt19937_64 rng(7);
    const double consts[] = {0, 0.5, 1, 2, 3.25, 1e-3, 1e20, 0.1};
    std::function<Expr(int)> gen = [&](int depth) -> Expr {
      const int pick = static_cast<int>(rng() % (depth > 0 ? 10 : 2));
      switch (pick) {
        case 0: return Expr::constant(consts[rng() % 8]);
        case 1: return Expr::variable();
        case 2: return gen(depth - 1) + gen(depth - 1);
        case 3: return gen(depth - 1) - gen(depth - 1);
        case 4: return gen(depth - 1) * gen(depth - 1);
        case 5: return gen(depth - 1) / gen(depth - 1);
        case 6: return Expr::pow(gen(depth - 1), gen(depth - 1));
        case 7: return -gen(depth - 1);
        default: return Expr::call(static_cast<Function>(rng() % 6), gen(depth - 1));
      }
    };
    for (int i = 0; i < 2000; ++i) {
      const Expr e = gen(5);
      const std::string s = to_string(e);
      CAPTURE(s);
      REQUIRE(parse(s) == e);
    }
  }

  TEST_CASE("eval and the jump decoration") {
    CHECK(eval(FuncSpec::parse("t^2"), 3, 0) == 9);
    const FuncSpec j = FuncSpec::parse("t", 5.0);
    CHECK(eval(j, 0, 0) == 5);
    CHECK(eval(j, 0.001, 0) == 0.001);
    CHECK(eval(FuncSpec::parse("t", 0.0), 0, 0) == 0);
    CHECK_FALSE(FuncSpec::parse("t", 0.0).has_jump());
    CHECK_THROWS_AS(eval(j, -1, 0), PreconditionError);
    // the jump touches exactly one point
    for (double t : {1e-300, 1e-12, 0.5, 3.0}) CHECK(eval(j, t, 0) == evaluate(j.body, t));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(evaluate(parse("ln(t)"), -1), DomainError);
    CHECK_THROWS_AS(evaluate(parse("ln(t)"), 0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("1/t"), 0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("sqrt(t)"), -1), DomainError);
    CHECK_THROWS_AS(evaluate(parse("t^0.5"), -1), DomainError);
    CHECK_THROWS_AS(evaluate(parse("t^-1"), 0), DomainError);
    CHECK_THROWS_AS(evaluate(parse("exp(t)"), 1000), NonFinite);
    CHECK(evaluate(parse("t^3"), -2) == -8);
    CHECK(evaluate(parse("t^0.4"), 0) == 0);
  }

  TEST_CASE("dual numbers") {
    const Dual sq = eval_dual(FuncSpec::parse("t^2"), 3);
    CHECK(sq.value == 9);
    CHECK(sq.deriv == 6);
    const Dual s = eval_dual(FuncSpec::parse("sin(t)"), 0);
    CHECK(s.value == 0);
    CHECK(s.deriv == 1);
    const Dual p = eval_dual(FuncSpec::parse("t^0.4"), 1);
    CHECK(p.value == 1);
    CHECK(p.deriv == doctest::Approx(0.4).epsilon(1e-15));
    // independent oracle: central difference
    const double h = 1e-6;
    const double fd = (std::pow(1 + h, 0.4) - std::pow(1 - h, 0.4)) / (2 * h);
    CHECK(std::fabs(p.deriv - fd) <= 1e-6 * std::fabs(fd));
    // jump ignored
    CHECK(eval_dual(FuncSpec::parse("t", 5.0), 0).value == 0);
  }

  TEST_CASE("non-differentiable points") {
    CHECK_THROWS_AS(eval_dual(FuncSpec::parse("abs(t-2)"), 2), NonDifferentiable);
    CHECK_THROWS_AS(eval_dual(FuncSpec::parse("sqrt(t)"), 0), NonDifferentiable);
    CHECK_THROWS_AS(eval_dual(FuncSpec::parse("t^0.4"), 0), NonDifferentiable);
    CHECK(eval_dual(FuncSpec::parse("abs(t-2)"), 3).deriv == 1);
    CHECK(eval_dual(FuncSpec::parse("abs(t-2)"), 1).deriv == -1);
    // a constant inside abs has no derivative to lose
    CHECK(eval_dual(FuncSpec::parse("abs(0*t)"), 0).deriv == 0);
    CHECK(eval_dual(FuncSpec::parse("t^1"), 0).deriv == 1);
    CHECK(eval_dual(FuncSpec::parse("t^2"), 0).deriv == 0);
  }

  TEST_CASE("dual derivative agrees with central differences on the registry") {
    for (const auto& e : builtin_registry()) {
      for (double a : {0.0, 1.0, -2.0}) {
        const FuncSpec f = e.instantiate(a);
        for (double off : {1e-3, 0.1, 0.7, 1.5, 4.0, 10.0}) {
          const double t = a + off;
          if (e.kink_offset && off == *e.kink_offset) continue;
          CAPTURE(f.to_string());
          CAPTURE(t);
          const double d = eval_dual(f, t).deriv;
          const double h = 1e-6;
          const double fd = (evaluate(f.body, t + h) - evaluate(f.body, t - h)) / (2 * h);
          CHECK(std::fabs(d - fd) <= 1e-5 * std::max(1.0, std::fabs(d)));
        }
      }
    }
  }

  TEST_CASE("FuncSpec text") {
    CHECK(FuncSpec::parse("t", 5.0).to_string() == "t [jump 5 at a]");
    CHECK(FuncSpec::parse("t^2").to_string() == "t^2");
  }
}
