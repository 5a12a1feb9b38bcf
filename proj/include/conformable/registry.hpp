#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conformable/expr.hpp"

namespace conformable {

/// A test function family parameterised by the lower terminal a, together
/// with the facts the checks rely on.
struct RegistryEntry {
  std::string name;
  /// Expression source for a given terminal.
  std::function<std::string(double a)> source;
  std::optional<double> jump;
  /// f(a) equals the right limit f(a+).
  bool right_continuous = true;
  /// The right first derivative exists at a (jump included).
  bool differentiable_at_terminal = true;
  /// f' is missing at a + offset (a kink).
  std::optional<double> kink_offset;

  FuncSpec instantiate(double a) const;
  /// True when f has a first derivative everywhere on (a, t].
  bool differentiable_on(double a, double t) const;
};

/// The built-in functions: constants, polynomials, power laws at the
/// terminal, trigonometric and exponential families, a jump at a and an
/// interior kink.
const std::vector<RegistryEntry>& builtin_registry();

/// FNV-1a over every entry instantiated at the given terminals.
std::string registry_hash(const std::vector<RegistryEntry>& registry, const std::vector<double>& terminals);

/// "t", "(t-1)" or "(t+2)".
std::string shifted(double a);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

}  // namespace conformable
