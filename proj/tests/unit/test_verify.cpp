#include <set>

#include "conformable/verify.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace conformable;

namespace {

const VerificationReport& report() {
  static const VerificationReport r = run_all();
  return r;
}

const CheckOutcome& find(const std::string& id, TerminalMode mode) {
  for (const auto& o : report().outcomes)
    if (o.check_id == id && o.mode == mode) return o;
  throw std::runtime_error("missing " + id);
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("every check appears once per mode, in canonical order") {
    const auto& r = report();
    REQUIRE(r.outcomes.size() == 20);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(r.outcomes[i].mode == TerminalMode::Original);
      CHECK(r.outcomes[i + 10].mode == TerminalMode::Corrected);
      CHECK(r.outcomes[i].check_id == check_ids()[i]);
      CHECK(r.outcomes[i + 10].check_id == check_ids()[i]);
    }
  }

  TEST_CASE("outcome matrix") {
    for (const auto& o : report().outcomes) {
      CAPTURE(o.check_id);
      CAPTURE(to_string(o.mode));
      CHECK(o.status == expected_status(o.check_id, o.mode));
    }
    CHECK(matches_expected(report()));
    CHECK(find("problem_1", TerminalMode::Original).status == CheckStatus::Skipped);
    for (int i = 2; i <= 6; ++i) {
      CHECK(find("problem_" + std::to_string(i), TerminalMode::Original).status == CheckStatus::Fail);
      CHECK(find("problem_" + std::to_string(i), TerminalMode::Corrected).status == CheckStatus::Pass);
    }
  }

  TEST_CASE("failures carry witnesses and passes stay under tolerance") {
    for (const auto& o : report().outcomes) {
      CAPTURE(o.check_id);
      if (o.status == CheckStatus::Fail) CHECK_FALSE(o.witnesses.empty());
      if (o.status == CheckStatus::Pass) CHECK(o.worst_ratio <= 1.0);
      if (o.status == CheckStatus::Skipped) CHECK_FALSE(o.skip_reason.empty());
    }
  }

  TEST_CASE("the jump witness breaks the continuity implication in Original mode") {
    const auto& o = find("continuity_implication", TerminalMode::Original);
    bool saw = false;
    for (const auto& w : o.witnesses) {
      if (w.function.find("jump") != std::string::npos && w.measured && *w.measured == 5.0 && w.t == w.a) saw = true;
    }
    CHECK(saw);
  }

  TEST_CASE("Original fails item 3 on the power-law witness") {
    const auto& o = find("problem_3", TerminalMode::Original);
    bool power = false;
    for (const auto& w : o.witnesses) power = power || w.function.find("^0.4") != std::string::npos;
    CHECK(power);
  }

  TEST_CASE("mode differences are only at the terminal") {
    for (const auto& o : report().outcomes) {
      if (o.mode != TerminalMode::Original || o.status != CheckStatus::Fail) continue;
      for (const auto& w : o.witnesses) {
        CAPTURE(o.check_id);
        CAPTURE(w.note);
        CHECK(w.t == w.a);
      }
    }
  }

  TEST_CASE("single-mode runs match the full run") {
    const auto c = run_all({TerminalMode::Corrected});
    REQUIRE(c.outcomes.size() == 10);
    CHECK(to_json(c).size() > 0);
    for (std::size_t i = 0; i < 10; ++i) CHECK(c.outcomes[i].status == report().outcomes[i + 10].status);
  }

  TEST_CASE("JSON report is deterministic and has the documented shape") {
    const std::string a = to_json(report());
    const std::string b = to_json(run_all());
    CHECK(a == b);
    const auto doc = nlohmann::json::parse(a);
    REQUIRE(doc.contains("meta"));
    REQUIRE(doc.contains("outcomes"));
    CHECK(doc["meta"]["registry_hash"].get<std::string>().size() == 16);
    CHECK(doc["meta"]["matches_expected"] == true);
    std::set<std::string> keys;
    for (const auto& o : doc["outcomes"]) {
      for (const char* k : {"check_id", "mode", "status", "witnesses"}) CHECK(o.contains(k));
      for (const auto& w : o["witnesses"])
        for (const char* k : {"function", "a", "alpha", "beta", "t", "measured", "expected", "tolerance", "note"})
          CHECK(w.contains(k));
      keys.insert(o["check_id"].get<std::string>() + "/" + o["mode"].get<std::string>());
    }
    CHECK(keys.size() == 20);
  }

  TEST_CASE("summary table") {
    const std::string s = summary_table(report());
    CHECK(s.find("problem_6") != std::string::npos);
    CHECK(s.find("matches the expected matrix") != std::string::npos);
    CHECK(s.find("MISMATCH") == std::string::npos);
  }

  TEST_CASE("registry hash tracks the registry") {
    const auto& reg = builtin_registry();
    CHECK(registry_hash(reg, {0, 1}) == registry_hash(reg, {0, 1}));
    CHECK(registry_hash(reg, {0, 1}) != registry_hash(reg, {0, 2}));
    CHECK(shifted(0) == "t");
    CHECK(shifted(1) == "(t-1)");
    CHECK(shifted(-2) == "(t+2)");
  }
}
