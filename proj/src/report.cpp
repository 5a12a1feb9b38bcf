#include <cstdio>
#include <sstream>

#include "conformable/verify.hpp"
#include "json.hpp"

namespace conformable {

namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json witness_json(const Witness& w) {
  json j;
  j["function"] = w.function;
  j["a"] = w.a;
  j["alpha"] = w.alpha;
  j["beta"] = optional_number(w.beta);
  j["t"] = w.t;
  j["measured"] = optional_number(w.measured);
  j["expected"] = optional_number(w.expected);
  j["tolerance"] = w.tolerance;
  j["note"] = w.note;
  return j;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string to_json(const VerificationReport& report) {
  const VerifyConfig& c = report.config;
  json meta;
  meta["tool"] = "conformable";
  meta["registry_hash"] = report.registry_hash;
  meta["seed"] = c.seed;
  meta["orders"] = c.orders;
  meta["offsets"] = c.offsets;
  meta["terminals"] = c.terminals;
  json tol;
  tol["closed"] = c.closed_tol;
  tol["limit"] = c.limit_tol;
  tol["inverse"] = c.inverse_tol;
  tol["terminal"] = c.terminal_tol;
  tol["continuity"] = c.continuity_tol;
  tol["quad_abs"] = c.quad.abs_tol;
  tol["quad_rel"] = c.quad.rel_tol;
  tol["quad_max_subdivisions"] = c.quad.max_subdivisions;
  const LimitSchedule sched;
  tol["theta0"] = sched.theta0;
  tol["shrink"] = sched.shrink;
  tol["levels"] = sched.levels;
  tol["cauchy"] = sched.cauchy_tol;
  tol["divergence_cap"] = sched.divergence_cap;
  meta["config"] = tol;
  meta["matches_expected"] = matches_expected(report);

  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    json j;
    j["check_id"] = o.check_id;
    j["mode"] = std::string(to_string(o.mode));
    j["status"] = std::string(to_string(o.status));
    j["expected_status"] = std::string(to_string(expected_status(o.check_id, o.mode)));
    if (o.status == CheckStatus::Skipped) j["reason"] = o.skip_reason;
    j["comparisons"] = o.comparisons;
    j["worst_ratio"] = o.worst_ratio;
    json ws = json::array();
    for (const auto& w : o.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = std::move(ws);
    outcomes.push_back(std::move(j));
  }

  json doc;
  doc["meta"] = std::move(meta);
  doc["outcomes"] = std::move(outcomes);
  return doc.dump(2) + "\n";
}

std::string summary_table(const VerificationReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %-10s %-8s %-8s %12s %10s\n", "check", "mode", "status", "expected",
                "worst/tol", "compared");
  os << line;
  for (const auto& o : report.outcomes) {
    const auto expected = expected_status(o.check_id, o.mode);
    std::snprintf(line, sizeof line, "%-24s %-10s %-8s %-8s %12s %10zu%s\n", o.check_id.c_str(),
                  std::string(to_string(o.mode)).c_str(), std::string(to_string(o.status)).c_str(),
                  std::string(to_string(expected)).c_str(), short_number(o.worst_ratio).c_str(), o.comparisons,
                  o.status == expected ? "" : "  MISMATCH");
    os << line;
  }
  os << (matches_expected(report) ? "outcome matrix matches the expected matrix\n"
                                  : "outcome matrix does NOT match the expected matrix\n");
  return os.str();
}

}  // namespace conformable
