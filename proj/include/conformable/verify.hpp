#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conformable/core.hpp"
#include "conformable/quad.hpp"
#include "conformable/registry.hpp"

namespace conformable {

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view to_string(CheckStatus status);

/// One compared quantity. A missing measured/expected value stands for
/// "does not exist".
struct Witness {
  std::string function;
  double a = 0.0;
  double alpha = 0.0;
  std::optional<double> beta;
  double t = 0.0;
  std::optional<double> measured;
  std::optional<double> expected;
  double tolerance = 0.0;
  std::string note;
};

struct CheckOutcome {
  std::string check_id;
  TerminalMode mode = TerminalMode::Corrected;
  CheckStatus status = CheckStatus::Pass;
  std::string skip_reason;
  /// Failing witnesses, or the single worst witness of a pass.
  std::vector<Witness> witnesses;
  /// Largest residual / tolerance ratio seen (0 when nothing numeric was compared).
  double worst_ratio = 0.0;
  std::size_t comparisons = 0;
};

struct VerifyConfig {
  std::vector<double> orders{0.1, 0.25, 0.4, 0.5, 0.75, 0.9, 1.0};
  std::vector<double> offsets{1e-3, 0.1, 1.0, 4.0};
  std::vector<double> terminals{0.0, 1.0, -2.0};
  std::uint64_t seed = 20240101;

  double closed_tol = 1e-9;      // closed-form identities, relative
  double limit_tol = 1e-6;       // limit route against closed values
  double inverse_tol = 1e-6;     // T I and I T
  double terminal_tol = 1e-6;    // values at the terminal
  double continuity_tol = 1e-9;  // |f(a+) - f(a)| for right continuity
  std::size_t max_witnesses = 12;
  QuadConfig quad{};
};

/// Canonical check order: the four theorem checks, then problem_1..problem_6.
const std::vector<std::string>& check_ids();

CheckOutcome check_continuity_implication(TerminalMode mode, const VerifyConfig& cfg = {});
CheckOutcome check_algebra_rules(TerminalMode mode, const VerifyConfig& cfg = {});
CheckOutcome check_order_relation(TerminalMode mode, const VerifyConfig& cfg = {});
CheckOutcome check_inverses(TerminalMode mode, const VerifyConfig& cfg = {});
std::vector<CheckOutcome> check_problem_list(TerminalMode mode, const VerifyConfig& cfg = {});

struct VerificationReport {
  std::vector<CheckOutcome> outcomes;
  std::string registry_hash;
  VerifyConfig config;
};

/// Runs every check for the given modes (Original first). Checks run
/// concurrently; outcomes come back in canonical order.
VerificationReport run_all(const std::vector<TerminalMode>& modes = {TerminalMode::Original,
                                                                      TerminalMode::Corrected},
                           const VerifyConfig& cfg = {});

/// The outcome each check is expected to have: Original fails the
/// continuity implication and checklist items 2-6, item 1 is always
/// skipped, everything else passes.
CheckStatus expected_status(const std::string& check_id, TerminalMode mode);

/// True when every outcome in the report has its expected status.
bool matches_expected(const VerificationReport& report);

/// JSON document {meta, outcomes}; stable key order and number formatting.
std::string to_json(const VerificationReport& report);

/// Fixed-width table: check, mode, status, expected, worst residual ratio.
std::string summary_table(const VerificationReport& report);

}  // namespace conformable
