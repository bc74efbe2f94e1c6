#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "reference_values.hpp"
#include "tfloc/cli.hpp"

using nlohmann::json;
namespace ref = tfloc::ref;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"tfloc"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  CliResult result;
  result.code = tfloc::run_cli(static_cast<int>(argv.size()), argv.data(),
                               out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

}  // namespace

TEST_CASE("classify reports a closed-form regime with its bound") {
  const CliResult r = run({"classify", "--p", "2", "--q", "3", "--A", "1",
                           "--B", "1.5"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("regime") == "P_DOMINANT");
  CHECK(doc.at("ratio").get<double>() == doctest::Approx(1.5));
  CHECK(doc.at("threshold_upper").get<double>() ==
        doctest::Approx(0.980566).epsilon(1e-5));
  CHECK(doc.at("threshold_lower").get<double>() ==
        doctest::Approx(0.873580).epsilon(1e-5));
  REQUIRE(doc.contains("bound"));
  CHECK(doc.at("bound").get<double>() ==
        doctest::Approx(0.70710678118654752).epsilon(1e-10));
}

TEST_CASE("classify omits the bound in the intermediate regime") {
  const CliResult r = run({"classify", "--p", "2", "--q", "3", "--A", "1",
                           "--B", "0.9"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("regime") == "INTERMEDIATE");
  CHECK_FALSE(doc.contains("bound"));
}

TEST_CASE("solve reproduces the frozen reference instance") {
  const CliResult r = run({"solve", "--d", "1", "--p", "1.5", "--q", "20",
                           "--A", "1", "--B", "1"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("regime") == "INTERMEDIATE");
  CHECK(doc.at("lambda1").get<double>() ==
        doctest::Approx(ref::skew15_20_lambda1).epsilon(1e-9));
  CHECK(doc.at("lambda2").get<double>() ==
        doctest::Approx(ref::skew15_20_lambda2).epsilon(1e-9));
  CHECK(doc.at("c1").get<double>() ==
        doctest::Approx(ref::skew15_20_c1).epsilon(1e-9));
  CHECK(doc.at("c2").get<double>() ==
        doctest::Approx(ref::skew15_20_c2).epsilon(1e-9));
  CHECK(doc.at("T").get<double>() ==
        doctest::Approx(ref::skew15_20_T).epsilon(1e-9));
  CHECK(doc.at("bound").get<double>() ==
        doctest::Approx(ref::skew15_20_bound).epsilon(1e-9));
  CHECK(doc.at("iterations").get<int>() > 0);
  CHECK(std::abs(doc.at("residual_p").get<double>()) <= 1e-8);
  CHECK(std::abs(doc.at("residual_q").get<double>()) <= 1e-8);
}

TEST_CASE("solve output is byte-stable across runs") {
  const CliResult a = run({"solve", "--p", "2.25", "--q", "1.714285714285714",
                           "--A", "1", "--B", "1"});
  const CliResult b = run({"solve", "--p", "2.25", "--q", "1.714285714285714",
                           "--A", "1", "--B", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("solve falls back to the closed form outside the band") {
  const CliResult r = run({"solve", "--p", "2", "--q", "3", "--A", "1",
                           "--B", "1.5"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("regime") == "P_DOMINANT");
  CHECK(doc.at("lambda1").is_null());
  CHECK(doc.at("lambda2").is_null());
  CHECK(doc.at("c1").is_null());
  CHECK(doc.at("c2").is_null());
  CHECK(doc.at("T").is_null());
  CHECK(doc.at("residual_p").is_null());
  CHECK(doc.at("residual_q").is_null());
  CHECK(doc.at("iterations").get<int>() == 0);
  CHECK(doc.at("bound").get<double>() ==
        doctest::Approx(0.70710678118654752).epsilon(1e-10));
}

TEST_CASE("profile emits a CSV with regime metadata") {
  const CliResult r = run({"profile", "--p", "2", "--q", "3", "--A", "1",
                           "--B", "0.9", "--rmax", "2", "--n", "41"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# regime=INTERMEDIATE");
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind("# lambda1=", 0) == 0);
  CHECK(line.find("lambda2=") != std::string::npos);
  CHECK(line.find("T=") != std::string::npos);
  REQUIRE(std::getline(lines, line));
  CHECK(line == "r,F");

  double prev = 0.0;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    const double rr = std::stod(line.substr(0, comma));
    const double ff = std::stod(line.substr(comma + 1));
    if (rows == 0) {
      CHECK(rr == 0.0);
      CHECK(ff > 0.0);
    } else {
      CHECK(ff <= prev + 1e-12);
    }
    prev = ff;
    ++rows;
  }
  CHECK(rows == 41);
}

TEST_CASE("profile reports the Gaussian parameters in closed-form regimes") {
  const CliResult r = run({"profile", "--p", "2", "--q", "3", "--A", "1",
                           "--B", "1.5", "--rmax", "1", "--n", "11"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "# regime=P_DOMINANT");
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind("# amplitude=", 0) == 0);
  CHECK(line.find("decay=") != std::string::npos);
  REQUIRE(std::getline(lines, line));
  CHECK(line == "r,F");
  REQUIRE(std::getline(lines, line));
  const double f0 = std::stod(line.substr(line.find(',') + 1));
  CHECK(f0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("invalid flags exit with code 2 and name the flag") {
  struct BadCall {
    std::initializer_list<const char*> args;
    const char* flagged;
  };
  const BadCall calls[] = {
      {{"classify", "--p", "0.9", "--q", "3"}, "--p"},
      {{"classify", "--p", "2", "--q", "0.9"}, "--q"},
      {{"solve", "--p", "2", "--q", "3", "--A", "0"}, "--A"},
      {{"solve", "--p", "2", "--q", "3", "--B", "-2"}, "--B"},
      {{"solve", "--d", "0", "--p", "2", "--q", "3"}, "--d"},
      {{"profile", "--p", "2", "--q", "3", "--B", "0.9", "--n", "1"}, "--n"},
      {{"profile", "--p", "2", "--q", "3", "--B", "0.9", "--rmax", "0"},
       "--rmax"},
      {{"verify-lieb", "--mixtures", "-1"}, "--mixtures"},
  };
  for (const auto& call : calls) {
    const CliResult r = run(call.args);
    CAPTURE(call.flagged);
    CHECK(r.code == 2);
    CHECK(r.err.find(call.flagged) != std::string::npos);
  }
}

TEST_CASE("unknown arguments and missing subcommands exit with code 2") {
  CHECK(run({"solve", "--p", "2", "--q", "3", "--frobnicate", "1"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  // out-of-range tolerance is rejected before any solve work happens
  CHECK(run({"solve", "--p", "2", "--q", "3", "--B", "0.9", "--tol", "0"})
            .code == 2);
}

TEST_CASE("verify-oracle reports its checks as JSON") {
  const CliResult r = run({"verify-oracle", "--seed", "1"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("seed").get<std::uint64_t>() == 1);
  CHECK(doc.at("pass").get<bool>());
  REQUIRE(doc.at("checks").is_array());
  CHECK(doc.at("checks").size() == 7);
  for (const auto& check : doc.at("checks")) {
    CHECK(check.contains("name"));
    CHECK(check.contains("measured"));
    CHECK(check.contains("limit"));
    CHECK(check.at("pass").get<bool>());
  }
}

TEST_CASE("verify-lieb passes with a reduced mixture count") {
  const CliResult r = run({"verify-lieb", "--mixtures", "2"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("pass").get<bool>());
  REQUIRE(doc.at("cases").is_array());
  CHECK(doc.at("cases").size() == 6);
  const auto& first = doc.at("cases").at(0);
  CHECK(first.at("signal") == "gaussian");
  CHECK(first.at("p").get<double>() == doctest::Approx(2.0));
  CHECK(first.at("q").get<double>() == doctest::Approx(2.0));
  for (const auto& item : doc.at("cases")) {
    CHECK(item.at("pass").get<bool>());
    CHECK(item.at("gap").get<double>() <= 1e-3);
  }
}

TEST_CASE("--out writes the document to a file and keeps stdout empty") {
  const std::string path = "cli_out_test.json";
  std::remove(path.c_str());
  const CliResult r = run({"classify", "--p", "2", "--q", "3", "--B", "1.5",
                           "--out", path.c_str()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  const json doc = json::parse(in);
  CHECK(doc.at("regime") == "P_DOMINANT");
  std::remove(path.c_str());
}

TEST_CASE("--out rejects unwritable paths") {
  const CliResult r = run({"classify", "--p", "2", "--q", "3", "--B", "1.5",
                           "--out", "/nonexistent-dir/out.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not writable") != std::string::npos);
}
