#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "ssflab/cli.hpp"

using namespace ssflab;
using namespace ssflab::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ssflab-test-" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config round trip is the identity") {
  ScenarioConfig c;
  c.d = 2;
  c.h = 0.25;
  c.U.period = {1.0, 2.0};
  c.U.coefficients = {1.0, 0.5, -0.25};
  c.x0 = {0.5, 1.5};
  c.V = {"bump", 3.0, 1.5, -1};
  c.D = {"linear-fraction", 0.25};
  c.L = {8, 10.5};
  c.g = {"polynomial", 1.0, {0.0, 1.0, 2.0}, 1.0, 0.0};
  c.mc.seed = 0xfffffffffffull;
  c.mc.n_samples = 1234;
  const auto once = parse_config(serialize_config(c));
  CHECK(once == c);
  CHECK(parse_config(serialize_config(once)) == once);
  CHECK(config_hash(once) == config_hash(c));
  c.h = 0.2;
  CHECK(config_hash(once) != config_hash(c));
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"default_d1.json", "default_d2.json"}) {
    const auto c = load_config(std::filesystem::path(SSFLAB_SOURCE_DIR) / "configs" / name);
    CHECK(parse_config(serialize_config(c)) == c);
  }
  CHECK(load_config(std::filesystem::path(SSFLAB_SOURCE_DIR) / "configs" / "default_d1.json") ==
        ScenarioConfig{});
}

TEST_CASE("config errors name the field") {
  const auto field_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  CHECK(field_of(R"({"d": 0})") == "d");
  CHECK(field_of(R"({"h": -1})") == "h");
  CHECK(field_of(R"({"V": {"kind": "cone"}})") == "V.kind");
  CHECK(field_of(R"({"mc": {"n_samples": 1}})") == "mc.n_samples");
  CHECK(field_of(R"({"L": [16, 12]})") == "L");
  CHECK(field_of(R"({"x0": [1.5]})") == "x0");
  CHECK(field_of(R"({"typo": 1})") == "typo");
  CHECK(field_of(R"({"h": "small"})") == "h");
  CHECK(field_of(R"({"d": 2})") == "<accepted>");
  try {
    parse_config("{\n  \"d\": 1,\n  oops\n}");
    FAIL("accepted malformed JSON");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("csv cells use 17 significant digits") {
  CHECK(CsvWriter::format(0.1) == "0.10000000000000001");
  CHECK(CsvWriter::format(true) == "1");
  CHECK(CsvWriter::format(std::string("a,b")) == "\"a,b\"");
  CHECK(CsvWriter::join(std::vector<double>{1.0, -2.5}) == "1;-2.5");
}

TEST_CASE("ssf with zero perturbation writes an all-zero curve and a manifest") {
  ScenarioConfig c;
  c.V.amplitude = 0.0;
  c.L = {6.0, 8.0};
  RunOptions o;
  o.out_dir = scratch("zero");
  CHECK(run_subcommand("ssf", c, o) == 0);
  std::ifstream in(o.out_dir / "ssf.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "L,mode,E,xi");
  while (std::getline(in, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");
  const auto manifest = slurp(o.out_dir / "manifest.json");
  CHECK(manifest.find(config_hash(c)) != std::string::npos);
  CHECK(manifest.find("\"partial\": false") != std::string::npos);
}

TEST_CASE("same config and seed give byte-identical tables for any thread count") {
  ScenarioConfig c;
  c.L = {8.0, 12.0};
  c.t = {0.5};
  c.mc.n_samples = 2000;
  for (const char* command : {"mc-laplace", "sweep-L", "cesaro"}) {
    RunOptions a, b;
    a.out_dir = scratch(std::string(command) + "-a");
    b.out_dir = scratch(std::string(command) + "-b");
    b.threads = 3;
    CHECK(run_subcommand(command, c, a) == 0);
    CHECK(run_subcommand(command, c, b) == 0);
    for (const auto& entry : std::filesystem::directory_iterator(a.out_dir))
      if (entry.path().extension() == ".csv")
        CHECK(slurp(entry.path()) == slurp(b.out_dir / entry.path().filename()));
  }
}

TEST_CASE("unknown subcommands are rejected") {
  RunOptions o;
  o.out_dir = scratch("unknown");
  CHECK_THROWS_AS(run_subcommand("frobnicate", ScenarioConfig{}, o), InvalidArgument);
}
