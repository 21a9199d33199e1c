#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lcl/cli.hpp"
#include "lcl/report.hpp"

using namespace lcl;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lcl_unit_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting and parsing") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(parse_complex("0.5") == Complex(0.5, 0));
    CHECK(parse_complex("1+0.1i") == Complex(1, 0.1));
    CHECK(parse_complex("-0.3-0.2i") == Complex(-0.3, -0.2));
    CHECK(parse_complex("2i") == Complex(0, 2));
    CHECK(parse_complex("-i") == Complex(0, -1));
    CHECK(parse_complex("1e-3 + 2e1j") == Complex(1e-3, 20));
    CHECK(parse_complex(format_complex({0.25, -1.5})) == Complex(0.25, -1.5));
    CHECK_THROWS_AS(parse_complex("1+2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  }

  TEST_CASE("csv and checksums") {
    CsvTable t{{"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
    CHECK(t.str() == "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
    // Published FNV-1a 64-bit test vectors.
    CHECK(fnv1a64("") == "cbf29ce484222325");
    CHECK(fnv1a64("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a64("foobar") == "85944171f73967e8");
  }

  TEST_CASE("config precedence and round trip") {
    const ojson file = {{"command", "circular"}, {"seeds", 5}, {"a", 0.4}, {"Ns", {64, 128}}};
    const ojson flags = {{"seeds", 3}};
    const ojson cfg = resolve_config("circular", file, flags);
    CHECK(cfg["seeds"] == 3);
    CHECK(cfg["a"] == ojson::array({0.4}));
    CHECK(cfg["Ns"] == ojson::array({64, 128}));
    CHECK(cfg["z0"] == "0.3+0.2i");
    CHECK(cfg["command"] == "circular");
    CHECK(resolve_config("circular", cfg, {}) == cfg);
    CHECK_THROWS_AS(resolve_config("circular", {{"bogus", 1}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_config("circular", {{"command", "girko"}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_config("circular", {{"ensemble", "cauchy"}}, {}), std::invalid_argument);
    CHECK_THROWS_AS(default_config("plot"), std::invalid_argument);
    for (const auto& name : command_names()) CHECK(default_config(name).contains("out"));
    CHECK(resolve_config("density", {}, {})["xmax"] == 4.0);
    // Scalar keys stay scalar where the command expects one.
    CHECK(resolve_config("girko", {}, {{"a", 0.1}})["a"] == 0.1);
    CHECK(resolve_config("ginibre-oracle", {}, {})["a"] == 0.25);
  }

  TEST_CASE("density run matches the Marchenko-Pastur closed form") {
    const fs::path dir = scratch_dir("density");
    ojson cfg = resolve_config("density", {}, {{"xmin", 0.0}, {"xmax", 4.0}, {"points", 201}, {"N", 64},
                                               {"out", dir.string()}});
    std::ostringstream err;
    REQUIRE(run(cfg, err) == kExitOk);
    std::istringstream csv(slurp(dir / "density.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x,rho");
    int rows = 0;
    while (std::getline(csv, line)) {
      const auto comma = line.find(',');
      const double x = std::stod(line.substr(0, comma));
      const std::string rho = line.substr(comma + 1);
      ++rows;
      if (x == 0.0) {
        CHECK(rho == "inf");
        continue;
      }
      const double exact = x < 4.0 ? std::sqrt((4.0 - x) / x) / (2.0 * std::numbers::pi) : 0.0;
      CHECK(std::abs(std::stod(rho) - exact) <= 1e-10);
    }
    CHECK(rows == 201);
    const ojson manifest = ojson::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["status"] == "complete");
    CHECK(manifest["schema_version"] == kSchemaVersion);
    for (const auto& [name, meta] : manifest["files"].items())
      CHECK(meta["fnv1a64"] == fnv1a64(slurp(dir / name)));
    CHECK(slurp(dir / "density.dat").rfind("# ", 0) == 0);
    CHECK_FALSE(fs::exists(dir / "density.csv.tmp"));
  }

  TEST_CASE("exit codes") {
    std::ostringstream err;
    const ojson bad = resolve_config("circular", {}, {{"z0", "1.0+0.0i"}, {"out", scratch_dir("gate").string()}});
    CHECK(run(bad, err) == kExitHypothesis);
    CHECK(err.str().find("τ ≤ ||z_0|−1|") != std::string::npos);
    const ojson manifest = ojson::parse(slurp(fs::path(bad["out"].get<std::string>()) / "manifest.json"));
    CHECK(manifest["status"] == "failed");
    std::ostringstream err2;
    const ojson badsweep = resolve_config("grid-sweep", {}, {{"z", "0.97"}, {"out", scratch_dir("gate2").string()}});
    CHECK(run(badsweep, err2) == kExitHypothesis);
  }

  TEST_CASE("minors report and byte-identical reruns") {
    const ojson base = {{"N", 50}, {"seed", 1}, {"z", "0.5"}, {"w", "1+0.1i"}, {"format", "json"}};
    ojson a = base, b = base;
    a["out"] = scratch_dir("minors_a").string();
    b["out"] = scratch_dir("minors_b").string();
    std::ostringstream err;
    REQUIRE(run(resolve_config("minors", a, {}), err) == kExitOk);
    REQUIRE(run(resolve_config("minors", b, {}), err) == kExitOk);
    const ojson rep = ojson::parse(slurp(fs::path(a["out"].get<std::string>()) / "minors.json"));
    CHECK(rep["schema_version"] == kSchemaVersion);
    for (const char* k : {"schur_G", "schur_Gcal", "rank_one_G", "rank_one_Gcal", "ygy", "trace_relation"})
      CHECK(rep[k].get<double>() <= 1e-10);
    CHECK(slurp(fs::path(a["out"].get<std::string>()) / "minors.json") ==
          slurp(fs::path(b["out"].get<std::string>()) / "minors.json"));
  }
}
