#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "conformable/cli.hpp"
#include "doctest.h"

using conformable::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("deriv") {
    auto r = cli({"deriv", "--expr", "t", "--alpha", "0.5", "--a", "0", "--t", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "value=2 err=0\n");

    r = cli({"deriv", "--expr", "(t-1)^0.4", "--alpha", "0.4", "--a", "1", "--t", "1", "--mode", "original"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("value=0.4", 0) == 0);

    r = cli({"deriv", "--expr", "(t-1)^0.4", "--alpha", "0.4", "--a", "1", "--t", "1"});
    CHECK(r.code == 2);
    CHECK(r.out.rfind("does-not-exist reason=", 0) == 0);

    r = cli({"deriv", "--expr", "t", "--alpha", "2", "--a", "0", "--t", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("alpha must lie in (0,1]") != std::string::npos);

    r = cli({"deriv", "--expr", "t +", "--alpha", "0.5", "--a", "0", "--t", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("offset 3") != std::string::npos);

    r = cli({"deriv", "--expr", "t", "--alpha", "0.5", "--a", "0", "--t", "-1"});
    CHECK(r.code == 1);

    r = cli({"deriv", "--expr", "t", "--alpha", "0.5", "--a", "0", "--t", "2", "--method", "limit"});
    CHECK(r.code == 0);

    r = cli({"deriv", "--expr", "t", "--jump", "5", "--alpha", "0.5", "--a", "0", "--t", "0", "--mode", "corrected"});
    CHECK(r.code == 2);
  }

  TEST_CASE("integ") {
    auto r = cli({"integ", "--expr", "1", "--alpha", "0.5", "--a", "0", "--t", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("value=4 ", 0) == 0);
    r = cli({"integ", "--expr", "t^2", "--alpha", "1", "--a", "0", "--t", "3"});
    CHECK(r.out.rfind("value=9 ", 0) == 0);
    r = cli({"integ", "--expr", "1", "--alpha", "0.5", "--a", "0", "--t", "0"});
    CHECK(r.code == 1);
    r = cli({"integ", "--expr", "sin(1/(t+0.001))", "--alpha", "1", "--a", "0", "--t", "1", "--max-subdivisions",
             "1", "--abs-tol", "1e-14", "--rel-tol", "1e-14"});
    CHECK(r.code == 3);
    r = cli({"integ", "--expr", "t", "--jump", "5", "--alpha", "0.5", "--a", "0", "--t", "2", "--compose", "it"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("value=1.99999", 0) == 0);
    r = cli({"integ", "--expr", "1/t", "--alpha", "0.5", "--a", "0", "--t", "2", "--compose", "it"});
    CHECK(r.code == 2);
  }

  TEST_CASE("usage errors") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"deriv"}).code == 1);
    CHECK(cli({"deriv", "--expr", "t", "--alpha", "x", "--a", "0", "--t", "1"}).code == 1);
    CHECK(cli({"deriv", "--expr", "t", "--alpha", "0.5", "--a", "0", "--t", "1", "--mode", "new"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
  }

  TEST_CASE("sweep alpha at the terminal shows the three branches") {
    auto r = cli({"sweep", "--var", "alpha", "--start", "0.1", "--stop", "1", "--steps", "10", "--expr", "(t-1)^0.4",
                  "--a", "1", "--t", "1", "--mode", "original"});
    REQUIRE(r.code == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == std::vector<std::string>{"param", "value", "err", "status"});
    for (int i = 1; i <= 10; ++i) {
      CAPTURE(i);
      REQUIRE(rows[i].size() == 4);
      const double alpha = std::stod(rows[i][0]);
      if (i <= 3) {
        CHECK(rows[i][3] == "ok");
        CHECK(std::fabs(std::stod(rows[i][1])) <= 1e-6);
      } else if (i == 4) {
        CHECK(alpha == 0.4);
        CHECK(std::stod(rows[i][1]) == doctest::Approx(0.4).epsilon(1e-6));
      } else {
        CHECK(rows[i][1].empty());
        CHECK(rows[i][3] == "dne");
      }
    }
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("sweep t and alpha at interior points") {
    auto r = cli({"sweep", "--var", "t", "--start", "0.5", "--stop", "3", "--steps", "6", "--expr", "1", "--a", "0",
                  "--alpha", "0.3"});
    REQUIRE(r.code == 0);
    for (std::size_t i = 1; i < csv(r.out).size(); ++i) CHECK(csv(r.out)[i][1] == "0");

    r = cli({"sweep", "--var", "alpha", "--start", "0.1", "--stop", "1", "--steps", "7", "--expr", "t", "--a", "0",
             "--t", "4"});
    const auto rows = csv(r.out);
    double prev = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double al = std::stod(rows[i][0]);
      const double v = std::stod(rows[i][1]);
      CHECK(v == doctest::Approx(std::pow(4.0, 1 - al)).epsilon(1e-14));
      CHECK(v < prev);
      prev = v;
    }
  }

  TEST_CASE("sweep validation and file output") {
    CHECK(cli({"sweep", "--start", "1", "--stop", "0.5", "--steps", "3", "--expr", "t", "--a", "0", "--t", "1"}).code == 1);
    CHECK(cli({"sweep", "--start", "0.1", "--stop", "0.5", "--steps", "1", "--expr", "t", "--a", "0", "--t", "1"}).code == 1);
    CHECK(cli({"sweep", "--start", "0", "--stop", "0.5", "--steps", "3", "--expr", "t", "--a", "0", "--t", "1"}).code == 1);
    CHECK(cli({"sweep", "--start", "0.5", "--stop", "1.5", "--steps", "3", "--expr", "t", "--a", "0", "--t", "1"}).code == 1);
    CHECK(cli({"sweep", "--var", "t", "--start", "-1", "--stop", "1", "--steps", "3", "--expr", "t", "--a", "0"}).code == 1);

    const auto path = std::filesystem::temp_directory_path() / "conformable_sweep_test.csv";
    auto r = cli({"sweep", "--op", "integ", "--var", "t", "--start", "1", "--stop", "4", "--steps", "2", "--expr", "1",
                  "--a", "0", "--alpha", "0.5", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = csv(ss.str());
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[2][1]) == doctest::Approx(4).epsilon(1e-12));
    std::filesystem::remove(path);
  }

  TEST_CASE("verify") {
    auto r = cli({"verify", "--mode", "corrected"});
    CHECK(r.code == 0);
    CHECK(r.out.find("corrected") != std::string::npos);
    CHECK(r.out.find("original ") == std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "conformable_verify_test.json";
    r = cli({"verify", "--json", path.string()});
    CHECK(r.code == 0);
    CHECK(std::filesystem::file_size(path) > 100);
    std::filesystem::remove(path);

    r = cli({"verify", "--json", "/nonexistent-dir/x.json"});
    CHECK(r.code == 1);
  }
}
