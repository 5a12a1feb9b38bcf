#include "conformable/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace conformable::limits {

Estimate richardson(std::span<const double> q, double shrink, int power_step) {
  Estimate best{q.empty() ? 0.0 : q.front(), std::numeric_limits<double>::infinity()};
  if (q.size() < 2) return best;

  const double base = std::pow(1.0 / shrink, power_step);
  std::vector<double> prev{q[0]};
  std::vector<double> row;
  for (std::size_t i = 1; i < q.size(); ++i) {
    row.assign(i + 1, 0.0);
    row[0] = q[i];
    double factor = 1.0;
    for (std::size_t j = 1; j <= i; ++j) {
      factor *= base;
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
      const double err = std::max(std::fabs(row[j] - row[j - 1]), std::fabs(row[j] - prev[j - 1]));
      if (err <= best.error) best = {row[j], err};
    }
    prev.swap(row);
  }
  return best;
}

namespace {

Estimate iterated_aitken(std::span<const double> seq) {
  std::vector<double> cur(seq.begin(), seq.end());
  Estimate best{cur.back(), std::fabs(cur.back() - cur[cur.size() - 2])};
  while (cur.size() >= 3) {
    std::vector<double> next;
    next.reserve(cur.size() - 2);
    for (std::size_t k = 0; k + 2 < cur.size(); ++k) {
      const double d1 = cur[k + 1] - cur[k];
      const double d2 = cur[k + 2] - cur[k + 1];
      const double den = d2 - d1;
      next.push_back(den == 0.0 ? cur[k + 2] : cur[k + 2] - d2 * d2 / den);
    }
    if (next.size() >= 2) {
      const double err = std::fabs(next.back() - next[next.size() - 2]);
      if (std::isfinite(err) && err < best.error) best = {next.back(), err};
    }
    cur.swap(next);
  }
  return best;
}

}  // namespace

SequenceLimit geometric_limit(std::span<const double> seq, double shrink, double tol, double cap) {
  SequenceLimit out;
  for (double x : seq) {
    if (!std::isfinite(x) || std::fabs(x) > cap) {
      out.reason = "sequence exceeds the divergence cap";
      return out;
    }
  }
  const std::size_t n = seq.size();
  if (n < 4) {
    out.reason = "too few samples to judge convergence";
    return out;
  }

  const double last = seq[n - 1];
  const double d_last = seq[n - 1] - seq[n - 2];
  const double d_prev = seq[n - 2] - seq[n - 3];
  const double thr = tol * std::max(1.0, std::fabs(last));

  if (std::fabs(d_last) <= thr && std::fabs(d_prev) <= thr) {
    return {true, last, std::fabs(d_last), {}};
  }
  if (std::fabs(d_last) >= std::fabs(d_prev)) {
    out.reason = "successive differences do not contract (sequence diverges)";
    return out;
  }

  const Estimate rich = richardson(seq, shrink, 1);
  if (rich.error <= tol * std::max(1.0, std::fabs(rich.value))) return {true, rich.value, rich.error, {}};

  const Estimate aitken = iterated_aitken(seq);
  if (aitken.error <= tol * std::max(1.0, std::fabs(aitken.value)))
    return {true, aitken.value, aitken.error, {}};

  out.reason = "extrapolated limit is not Cauchy within tolerance";
  out.value = aitken.value;
  out.error = aitken.error;
  return out;
}

}  // namespace conformable::limits
