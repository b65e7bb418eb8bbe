#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "dmspec/io/config.hpp"
#include "dmspec/io/svg.hpp"
#include "dmspec/io/table.hpp"
#include "support/generators.hpp"

using namespace dmspec;
using namespace dmspec::io;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "io_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("csv quoting") {
  Table t;
  t.columns = {"name", "value"};
  t.rows = {{"plain", 1.5}, {"with,comma", nullptr}, {"say \"hi\"", true}, {"two\nlines", 7}};
  const auto csv = to_csv(t);
  CHECK(csv ==
        "name,value\r\nplain,1.5\r\n\"with,comma\",\r\n\"say \"\"hi\"\"\",true\r\n"
        "\"two\nlines\",7\r\n");
  const auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 5);
  CHECK(parsed[1] == std::vector<std::string>{"plain", "1.5"});
  CHECK(parsed[2] == std::vector<std::string>{"with,comma", ""});
  CHECK(parsed[3] == std::vector<std::string>{"say \"hi\"", "true"});
  CHECK(parsed[4] == std::vector<std::string>{"two\nlines", "7"});
  CHECK_THROWS_AS(parse_csv("\"open"), InvalidParameter);
  CHECK(parse_csv("a,b\nc,d").size() == 2);
}

TEST_CASE("format_number reads back exactly") {
  gen::Source src(51);
  for (int i = 0; i < 1000; ++i) {
    const double x = src.uniform(-1e3, 1e3) * std::pow(10.0, src.integer(-12, 12));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("csv and json carry identical doubles") {
  gen::Source src(52);
  Report r;
  r.command = "bands";
  r.summary = {{"max_period", 4}};
  r.table.columns = {"lo", "hi"};
  for (int i = 0; i < 50; ++i) r.table.rows.push_back({src.uniform(-5, 5), src.uniform(-5, 5)});

  const auto csv = parse_csv(to_csv(r.table));
  const auto back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  REQUIRE(back.table.rows.size() == 50);
  CHECK(back.command == "bands");
  CHECK(back.summary == r.summary);
  CHECK(back.table.columns == r.table.columns);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double j = back.table.rows[i][c].get<double>();
      CHECK(j == r.table.rows[i][c].get<double>());
      CHECK(std::stod(csv[i + 1][c]) == j);
    }
  }
  CHECK_THROWS_AS(report_from_json({{"command", "x"}}), InvalidParameter);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(nlohmann::json::parse(R"({
    "type": "trigpoly", "const": 0.5, "cos": [1.0], "sin": [],
    "command": {"max_period": 7, "energies": [1.5, 2.5]},
    "seed": 42, "format": "json", "plot": "out.svg", "threads": 3})"));
  REQUIRE(c.function.has_value());
  CHECK((*c.function)(0.0) == doctest::Approx(1.5));
  CHECK(c.param<int>("max_period", 10) == 7);
  CHECK(c.param<int>("missing", 10) == 10);
  CHECK(c.param<std::vector<double>>("energies", {}) == std::vector<double>{1.5, 2.5});
  CHECK_THROWS_AS(c.param<int>("energies", 0), InvalidParameter);
  CHECK(c.seed == 42u);
  CHECK(c.format == "json");
  CHECK(c.plot == "out.svg");
  CHECK(c.threads == 3);

  const auto bare = parse_config(nlohmann::json::object());
  CHECK_FALSE(bare.function.has_value());
  CHECK_FALSE(bare.seed.has_value());
  CHECK(bare.command.empty());

  CHECK_THROWS_AS(parse_config(nlohmann::json::array()), InvalidParameter);
  CHECK_THROWS_AS(parse_config({{"command", 3}}), InvalidParameter);
  CHECK_THROWS_AS(parse_config({{"seed", "x"}}), InvalidParameter);
  CHECK_THROWS_AS(parse_config({{"type", "step"}, {"breaks", {0.5}}, {"values", {1}}}),
                  InvalidParameter);
}

TEST_CASE("config files") {
  const auto good = write_temp("good.json", R"({"type": "step", "breaks": [0, 0.5], "values": [3, 0]})");
  const auto c = load_config(good);
  REQUIRE(c.function.has_value());
  CHECK((*c.function)(0.25) == 3.0);
  const auto bad = write_temp("bad.json", "{ not json");
  CHECK_THROWS_AS(load_config(bad), InvalidParameter);
  CHECK_THROWS_AS(load_config("io_test_does_not_exist.json"), InvalidParameter);
  std::remove(good.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("function specs") {
  CHECK(parse_function_spec("free")(0.3) == 0.0);
  CHECK(parse_function_spec("const:-1.5")(0.3) == -1.5);
  CHECK(parse_function_spec("cos:0.5")(0.0) == doctest::Approx(1.0));
  CHECK(parse_function_spec("bernoulli:5")(0.1) == 5.0);
  CHECK(parse_function_spec("bernoulli:5")(0.6) == 0.0);
  CHECK_THROWS_AS(parse_function_spec("cos"), InvalidParameter);
  CHECK_THROWS_AS(parse_function_spec("cos:abc"), InvalidParameter);
  CHECK_THROWS_AS(parse_function_spec("cos:1x"), InvalidParameter);
  CHECK_THROWS_AS(parse_function_spec("sine:1"), InvalidParameter);
}

TEST_CASE("band diagram svg") {
  const auto f = SamplingFunction::bernoulli(5.0);
  const auto per_orbit = all_periodic_bands(f, 3);
  const auto merged = union_spectrum(f, 3);
  const auto svg = band_diagram_svg(per_orbit, merged);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("p = 3") != std::string::npos);
  std::size_t band_count = 0;
  for (const auto& ob : per_orbit) band_count += ob.bands.size();
  // One rect per band and per merged band, plus the background.
  CHECK(count(svg, "<rect") == band_count + merged.bands.size() + 1);
  CHECK(svg == band_diagram_svg(per_orbit, merged));
}

TEST_CASE("ids staircase svg") {
  IdsTable t;
  t.energies = {-3.0, 0.0, 3.0};
  t.k_values = {0.0, 0.5, 1.0};
  t.truncation_size = 64;
  t.sample_count = 1;
  const auto plain = ids_staircase_svg(t);
  CHECK(count(plain, "<polyline") == 1);
  SpectrumApprox s = merge_bands({{-2.0, -1.0}, {1.0, 2.0}}, 0.0);
  const auto shaded = ids_staircase_svg(t, &s);
  CHECK(count(shaded, "<rect") == count(plain, "<rect") + 2);
}
