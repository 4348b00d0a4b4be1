#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"windcournot"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = windcournot::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// One JSON object on a single line, with the exit code echoed.
void check_error_line(const Run& r) {
  REQUIRE_FALSE(r.err.empty());
  CHECK(r.err.back() == '\n');
  CHECK(r.err.find('\n') == r.err.size() - 1);
  const auto line = nlohmann::json::parse(r.err);
  CHECK(line.contains("error"));
  CHECK(line.contains("message"));
  CHECK(line["exit_code"] == r.code);
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("duopoly solve reports the closed-form equilibrium") {
  const Run r = invoke({"duopoly", "solve", "--s", "3", "--beta", "0.5", "--d", "1", "--L",
                        "0.6", "--H", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["phi"].get<double>() == doctest::Approx(1.08).epsilon(1e-14));
  CHECK(doc["expectations"]["e_welfare"].get<double>() == doctest::Approx(3.5712));
  CHECK(doc["decomposition"]["price"]["wd_term"].get<double>() == 0.0);
}

TEST_CASE("csv format flattens solve output") {
  const Run r = invoke({"duopoly", "solve", "--s", "3", "--beta", "0.5", "--d", "1", "--L",
                        "0.6", "--H", "2", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("key,value\n", 0) == 0);
  CHECK(r.out.find("\nphi,1.08") != std::string::npos);
}

TEST_CASE("other markets solve") {
  const Run mixed = invoke({"mixed", "solve", "--s", "3", "--beta", "0.5", "--d", "0", "--L",
                            "0.1", "--H", "2", "--c", "1"});
  REQUIRE(mixed.code == 0);
  const auto m = nlohmann::json::parse(mixed.out);
  CHECK(m["phi"].get<double>() == doctest::Approx(0.82));
  CHECK(m["x"].get<double>() == doctest::Approx(0.54));

  const Run multi = invoke({"multi", "solve", "--s", "3", "--n", "3", "--beta", "0.5", "--d",
                            "1", "--L", "0.3", "--H", "2"});
  REQUIRE(multi.code == 0);
  CHECK(nlohmann::json::parse(multi.out)["expectations"]["e_total_output"].get<double>() ==
        doctest::Approx(1.8));

  const Run coll = invoke({"collusion", "assess", "--beta", "0.5", "--d", "0.5", "--L", "0.1"});
  REQUIRE(coll.code == 0);
  const auto c = nlohmann::json::parse(coll.out);
  CHECK(c["interval"][0].get<double>() == doctest::Approx(0.215));
  CHECK(c["gamma_hat"]["binding"] == "irh");

  const Run info = invoke({"info-sharing", "assess", "--beta", "0.5", "--d", "0.5", "--L", "0.2"});
  REQUIRE(info.code == 0);
  CHECK(nlohmann::json::parse(info.out)["l_star"].get<double>() ==
        doctest::Approx(14.5 / 55.5));
}

TEST_CASE("configuration errors exit 2") {
  const auto cfg = temp_file("windcournot_unknown.json", R"({"beta": 0.5, "delta": 1})");
  const Run unknown = invoke({"duopoly", "solve", "--config", cfg.c_str()});
  CHECK(unknown.code == 2);
  check_error_line(unknown);
  CHECK(unknown.err.find("delta") != std::string::npos);

  const auto bad_type = temp_file("windcournot_type.json", R"({"beta": "half"})");
  CHECK(invoke({"duopoly", "solve", "--config", bad_type.c_str()}).code == 2);

  const Run missing = invoke({"duopoly", "solve", "--config", "/nonexistent/cfg.json"});
  CHECK(missing.code == 2);
  check_error_line(missing);

  const Run invalid = invoke({"duopoly", "solve", "--s", "3", "--beta", "1.5", "--d", "1",
                              "--L", "0.6", "--H", "2"});
  CHECK(invalid.code == 2);
  check_error_line(invalid);

  const Run no_command = invoke({});
  CHECK(no_command.code == 2);
  check_error_line(no_command);
  CHECK(invoke({"duopoly", "solve", "--bogus", "1"}).code == 2);
}

TEST_CASE("assumption failures exit 3") {
  const Run solve = invoke({"duopoly", "solve", "--s", "3", "--beta", "0.5", "--d", "1", "--L",
                            "1.2", "--H", "2"});
  CHECK(solve.code == 3);
  check_error_line(solve);

  // A sweep still writes every row before reporting the failure.
  const Run sweep = invoke({"duopoly", "sweep", "--s", "3", "--beta", "0.5", "--L", "1.2",
                            "--H", "2", "--over", "d", "--steps", "3"});
  CHECK(sweep.code == 3);
  check_error_line(sweep);
  std::istringstream lines(sweep.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 4);
  CHECK(sweep.out.find("assumption_violation") != std::string::npos);

  CHECK(invoke({"collusion", "assess", "--beta", "0.5", "--d", "0.5", "--L", "0.4"}).code == 3);
}

TEST_CASE("sweeps are deterministic") {
  const Run a = invoke({"duopoly", "sweep", "--s", "3", "--beta", "0.5", "--L", "0.6", "--H",
                        "2", "--over", "d", "--steps", "41"});
  const Run b = invoke({"duopoly", "sweep", "--s", "3", "--beta", "0.5", "--L", "0.6", "--H",
                        "2", "--over", "d", "--steps", "41"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("d,phi,E_welfare", 0) == 0);
  const Run c = invoke({"collusion", "sweep", "--beta", "0.5", "--L", "0.1", "--over", "d"});
  const Run d = invoke({"collusion", "sweep", "--beta", "0.5", "--L", "0.1", "--over", "d"});
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "windcournot_sweep.csv";
  std::filesystem::remove(path);
  const Run r = invoke({"mixed", "sweep", "--s", "3", "--beta", "0.5", "--L", "0.1", "--H", "2",
                        "--c", "1", "--over", "d", "--steps", "5", "--out", path.c_str()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str().rfind("d,phi,x,E_price", 0) == 0);
}

TEST_CASE("config file drives a sweep") {
  const auto cfg = temp_file("windcournot_sweep.json", R"({
    "demand": {"kind": "linear", "s": 3},
    "beta": 0.5, "L": 0.6, "H": 2,
    "sweep": {"over": "beta", "from": 0.1, "to": 0.9, "steps": 9},
    "format": "json"
  })");
  const Run r = invoke({"duopoly", "sweep", "--config", cfg.c_str(), "--d", "0.5"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 9);
  CHECK(doc[0]["beta"].get<double>() == doctest::Approx(0.1));
  CHECK(doc[8]["status"] == "ok");
}

TEST_CASE("validate and verify") {
  const Run v = invoke({"validate", "--family", "mixture", "--n", "5", "--beta", "0.3",
                        "--d-grid", "11"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("d,d_prime,fosd,sosd", 0) == 0);

  const Run ok = invoke({"verify", "--grid", "1000"});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["passed"] == true);

  const auto cfg = temp_file("windcournot_verify_multi.json", R"({
    "market": "multi", "demand": {"kind": "linear", "s": 3},
    "n_plus_1": 5, "beta": 0.5, "d": 0.5, "L": 0.18, "H": 2
  })");
  const Run multi = invoke({"verify", "--grid", "1000", "--config", cfg.c_str()});
  CHECK(multi.out.find("multi_fixed_point") != std::string::npos);
  CHECK(multi.code == 0);
}
