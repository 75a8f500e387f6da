#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using pyragas::cli::parse_angle;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = pyragas::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pyragas_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    kept += line + '\n';
  }
  return kept;
}

}  // namespace

TEST_CASE("angles") {
  CHECK(parse_angle("pi/4") == doctest::Approx(kPi / 4));
  CHECK(parse_angle("-pi/4") == doctest::Approx(-kPi / 4));
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4));
  CHECK(parse_angle("2pi") == doctest::Approx(2 * kPi));
  CHECK(parse_angle("0.785") == 0.785);
  CHECK_THROWS_AS(parse_angle("pie"), std::invalid_argument);
  CHECK_THROWS_AS(parse_angle(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_angle("pi/0"), std::invalid_argument);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == pyragas::cli::kConfigError);
  const Run missing = run({"simulate"});
  CHECK(missing.code == pyragas::cli::kConfigError);
  CHECK(missing.err.find("--lambda") != std::string::npos);
  CHECK(run({"simulate", "--lambda", "0.1"}).code == pyragas::cli::kConfigError);
  CHECK(run({"hopf", "--beta", "5*pi/4"}).code == pyragas::cli::kConfigError);
  CHECK(run({"--help"}).code == pyragas::cli::kOk);
}

TEST_CASE("numerical failure") {
  const fs::path dir = scratch("numeric");
  const Run r = run({"hopf", "--approach", "lambda-axis", "--K", "-0.15915494309189535", "--beta", "0",
                     "--out-dir", dir.string()});
  CHECK(r.code == pyragas::cli::kNumericError);
}

TEST_CASE("simulate with zero gain is the ODE") {
  const fs::path dir = scratch("simulate");
  const std::vector<std::string> base{"simulate", "--lambda", "-0.005", "--gamma", "-10", "--periods", "3",
                                      "--out-dir", dir.string()};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  REQUIRE(run(with({"--K", "0", "--prefix", "dde"})).code == 0);
  REQUIRE(run(with({"--ode", "--prefix", "ode"})).code == 0);
  CHECK(without_comments(slurp(dir / "dde_trajectory.csv")) == without_comments(slurp(dir / "ode_trajectory.csv")));

  const auto verdict = nlohmann::json::parse(slurp(dir / "dde_verdict.json"));
  CHECK(verdict["system"] == "dde");
  CHECK(verdict["flags"]["lambda"] == "-0.005");
  CHECK(verdict["flags"]["K"] == "0");
  CHECK(verdict["flags"]["ode"] == "false");
  CHECK(verdict["flags"]["tau"] == "unset");

  const std::string header = slurp(dir / "ode_trajectory.csv");
  CHECK(header.rfind("# command = simulate\n", 0) == 0);
  CHECK(header.find("# ode = true\n") != std::string::npos);

  REQUIRE(run(with({"--K", "0", "--prefix", "again"})).code == 0);
  CHECK(without_comments(slurp(dir / "dde_trajectory.csv")) == without_comments(slurp(dir / "again_trajectory.csv")));
  auto strip = [](nlohmann::json j) {
    j.erase("flags");
    return j;
  };
  CHECK(strip(nlohmann::json::parse(slurp(dir / "again_verdict.json"))) == strip(verdict));
}

TEST_CASE("angle flags are echoed in radians") {
  const fs::path dir = scratch("angle");
  REQUIRE(run({"simulate", "--lambda", "-0.005", "--gamma", "-10", "--K", "0.25", "--beta", "pi/4", "--periods",
               "1", "--out-dir", dir.string()})
              .code == 0);
  const auto verdict = nlohmann::json::parse(slurp(dir / "simulate_verdict.json"));
  CHECK(std::stod(verdict["flags"]["beta"].get<std::string>()) == kPi / 4);
}

TEST_CASE("spectrum and hopf documents") {
  const fs::path dir = scratch("docs");
  REQUIRE(run({"spectrum", "--variant", "variational", "--lambda", "-0.05", "--gamma", "-10", "--K", "0.25",
               "--beta", "pi/4", "--re-min", "-1", "--re-max", "1", "--im-min", "-2", "--im-max", "2",
               "--out-dir", dir.string()})
              .code == 0);
  const auto s = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  bool zero = false;
  for (const auto& r : s["roots"]) {
    if (std::abs(r["re"].get<double>()) < 1e-8 && std::abs(r["im"].get<double>()) < 1e-8) zero = true;
  }
  CHECK(zero);

  REQUIRE(run({"hopf", "--approach", "left", "--gamma", "-10", "--K", "0.25", "--beta", "pi/4", "--out-dir",
               dir.string()})
              .code == 0);
  const auto h = nlohmann::json::parse(slurp(dir / "hopf.json"));
  CHECK(h["mu2"].get<double>() == doctest::Approx(-4.0));
}

TEST_CASE("chart command") {
  const fs::path dir = scratch("chart");
  REQUIRE(run({"chart", "neutral", "--nx", "20", "--ny", "20", "--out-dir", dir.string()}).code == 0);
  CHECK(fs::exists(dir / "chart_cells.csv"));
  CHECK(fs::exists(dir / "chart.svg"));
  CHECK(fs::exists(dir / "chart_boundary.json"));
  CHECK(run({"chart", "sideways", "--out-dir", dir.string()}).code == pyragas::cli::kConfigError);
}

TEST_CASE("verify subcommand") {
  const Run r = run({"verify", "--filter", "model.", "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] model.non_invasive (seed 7)") != std::string::npos);
  CHECK(r.out.find("[FAIL]") == std::string::npos);

  ::setenv("PYRAGAS_LAB_SEED", "1234", 1);
  const Run e = run({"verify", "--filter", "model.non_invasive"});
  ::unsetenv("PYRAGAS_LAB_SEED");
  CHECK(e.out.find("(seed 1234)") != std::string::npos);
}
