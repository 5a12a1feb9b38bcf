#pragma once

namespace conformable {

// First-order dual number a + b*eps with eps^2 = 0. The elementary functions
// live in expr.cpp where domain checks are applied.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  static constexpr Dual constant(double v) { return {v, 0.0}; }
  static constexpr Dual variable(double v) { return {v, 1.0}; }
};

constexpr Dual operator+(Dual x, Dual y) { return {x.value + y.value, x.deriv + y.deriv}; }
constexpr Dual operator-(Dual x, Dual y) { return {x.value - y.value, x.deriv - y.deriv}; }
constexpr Dual operator-(Dual x) { return {-x.value, -x.deriv}; }
constexpr Dual operator*(Dual x, Dual y) {
  return {x.value * y.value, x.deriv * y.value + x.value * y.deriv};
}
constexpr Dual operator/(Dual x, Dual y) {
  return {x.value / y.value, (x.deriv * y.value - x.value * y.deriv) / (y.value * y.value)};
}

constexpr bool operator==(Dual x, Dual y) { return x.value == y.value && x.deriv == y.deriv; }

}  // namespace conformable
