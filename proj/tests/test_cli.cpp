#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dmspec/io/table.hpp"
#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = dmspec::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const auto r = run(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  return nlohmann::json::parse(r.out);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("usage and configuration errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"bands", "--max-period", "0", "--function", "free"}).code == 2);
  CHECK(run({"bands", "--format", "xml", "--function", "free"}).code == 2);
  CHECK(run({"bands", "--config", "cli_test_missing.json"}).code == 2);
  const auto missing = run({"bands"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error") != std::string::npos);
  CHECK(run({"bands", "--function", "cos"}).code == 2);
  CHECK(run({"bands", "--function", "free", "--param", "noequals"}).code == 2);

  std::ofstream("cli_test_bad.json") << "{ broken";
  CHECK(run({"spectrum", "--config", "cli_test_bad.json"}).code == 2);
  std::remove("cli_test_bad.json");
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bands for the free operator") {
  const auto j = run_json({"bands", "--function", "free", "--max-period", "3"});
  CHECK(j["command"] == "bands");
  CHECK(j["summary"]["orbits"] == 4);
  for (const auto& row : j["rows"]) {
    CHECK(row[4].get<double>() == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(row[5].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("spectrum of a constant potential") {
  const auto j = run_json({"spectrum", "--function", "const:1.5", "--max-period", "4"});
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0][1].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(j["rows"][0][2].get<double>() == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("gaps for the bernoulli potential") {
  const auto j = run_json({"gaps", "--function", "bernoulli:5", "--max-period", "8"});
  CHECK(j["summary"]["connected"] == false);
  const auto& rows = j["rows"];
  REQUIRE(rows.size() >= 1);
  CHECK(rows[0][4] == "resolved");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][4] == "resolved") CHECK(rows[i][3].get<double>() <= rows[i - 1][3].get<double>());
  }
  // The widest gap opens below the band [3, 7] of the fixed point.
  CHECK(rows[0][2].get<double>() == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("ids and rotation tables") {
  const auto ids = run_json({"ids", "--function", "free", "--max-period", "2", "--param", "N=128",
                             "--param", "M=2", "--param", "grid_count=41"});
  CHECK(ids["rows"].size() == 41);
  CHECK(ids["rows"][0][1] == 0.0);
  CHECK(ids["rows"][40][1] == 1.0);

  const auto rot = run_json({"rotation", "--function", "free", "--energy", "-3", "--energy", "0",
                             "--param", "omega_samples=4", "--param", "steps=100"});
  REQUIRE(rot["rows"].size() == 2);
  CHECK(rot["rows"][0][1] == true);
  CHECK(rot["rows"][0][2].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rot["rows"][0][4] == "Integer(1)");
  CHECK(rot["rows"][1][1] == false);
}

TEST_CASE("verify checks pass for the reference functions") {
  for (const char* f : {"free", "cos:0.5", "bernoulli:5"}) {
    const auto r = run({"verify", "--function", f, "--format", "json"});
    CHECK_MESSAGE(r.code == 0, f << ": " << r.out << r.err);
    if (r.code == 0) CHECK(nlohmann::json::parse(r.out)["summary"]["all_passed"] == true);
  }
}

TEST_CASE("acceptance criteria can be run one at a time") {
  const auto r = run({"verify", "--only", "5", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0][0] == 5);
  CHECK(r.err.find("PASS [5]") != std::string::npos);
}

TEST_CASE("output is deterministic across thread counts and formats") {
  const std::vector<std::string> base{"ids", "--function", "cos:0.5", "--max-period", "3",
                                      "--param", "N=64", "--param", "M=6", "--param",
                                      "grid_count=21", "--seed", "9"};
  auto one = base;
  one.insert(one.end(), {"--threads", "1"});
  auto four = base;
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one);
  const auto b = run(four);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  auto json_args = one;
  const auto j = run_json(json_args);
  const auto csv = dmspec::io::parse_csv(a.out);
  REQUIRE(csv.size() == j["rows"].size() + 1);
  for (std::size_t i = 0; i < j["rows"].size(); ++i) {
    CHECK(std::stod(csv[i + 1][1]) == j["rows"][i][1].get<double>());
  }
}

TEST_CASE("config files, --out and --plot") {
  std::ofstream("cli_test_config.json")
      << R"({"type": "step", "breaks": [0, 0.5], "values": [5, 0],
             "command": {"max_period": 3}, "format": "json", "plot": "cli_test_plot.svg"})";
  const auto r = run({"bands", "--config", "cli_test_config.json", "--out", "cli_test_out.json"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(slurp("cli_test_out.json"));
  CHECK(j["summary"]["max_period"] == 3);
  const auto svg = slurp("cli_test_plot.svg");
  CHECK(svg.find("<svg") != std::string::npos);

  // Command-line flags override the file.
  const auto csv = run({"bands", "--config", "cli_test_config.json", "--format", "csv",
                        "--max-period", "2", "--plot", "cli_test_plot2.svg"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("kind,period,orbit,index,lo,hi\r\n", 0) == 0);
  CHECK_FALSE(slurp("cli_test_plot2.svg").empty());

  for (const char* p : {"cli_test_config.json", "cli_test_out.json", "cli_test_plot.svg",
                        "cli_test_plot2.svg"}) {
    std::remove(p);
  }
}
