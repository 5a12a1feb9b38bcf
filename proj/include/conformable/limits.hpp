#pragma once

#include <span>
#include <string>

namespace conformable::limits {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Ridders-style Richardson tableau over q(h_k), h_k = h_0 * shrink^k, for an
/// error expansion in powers h^(power_step), h^(2*power_step), ... Returns the
/// tableau entry with the smallest error estimate.
Estimate richardson(std::span<const double> q, double shrink, int power_step);

struct SequenceLimit {
  bool exists = false;
  double value = 0.0;
  double error = 0.0;
  std::string reason;
};

/// Limit of a sequence sampled on a geometric mesh h_k -> 0 whose error
/// terms may be non-integer powers of h (h^0.1, h^0.6, ...).
///
/// A sequence that leaves [-cap, cap] or whose tail differences do not
/// contract is reported as divergent. Otherwise integer-power Richardson is
/// tried first, then iterated Aitken (exact for a single power law on a
/// geometric mesh). The limit exists when one of them is Cauchy within
/// tol * max(1, |value|).
SequenceLimit geometric_limit(std::span<const double> seq, double shrink, double tol, double cap);

}  // namespace conformable::limits
