#include <doctest.h>

#include <numbers>
#include <sstream>

#include "pyragas/io.hpp"

using namespace pyragas;

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("doubles round-trip") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, kPi}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("trajectory CSV") {
  const Trajectory tr = integrate_ode(ModelParams{-0.5, 1.0}, Complex{0.3, 0.1}, 1.0, 0.1);
  std::ostringstream a, b;
  io::write_trajectory_csv(a, tr, 2, {{"command", "simulate"}, {"lambda", "-0.5"}});
  io::write_trajectory_csv(b, tr, 2, {{"command", "simulate"}, {"lambda", "-0.5"}});
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# command = simulate");
  std::getline(in, line);
  CHECK(line == "# lambda = -0.5");
  std::getline(in, line);
  CHECK(line == "t,re,im,abs,phase");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}

TEST_CASE("deviation CSV") {
  DeviationSeries d;
  d.t = {0.0, 1.0};
  d.radial = {0.1, 0.05};
  d.phase = {0.0, -0.01};
  std::ostringstream os;
  io::write_deviation_csv(os, d);
  CHECK(os.str() == "t,radial,phase\n0,0.10000000000000001,0\n1,0.050000000000000003,-0.01\n");
}

TEST_CASE("JSON documents") {
  const io::Json p = io::to_json(ModelParams{-0.005, -10.0});
  CHECK(p["lambda"].get<double>() == -0.005);
  CHECK(p.dump() == R"({"lambda":-0.005,"gamma":-10.0})");

  const HopfPoint point = pyragas_hopf_point();
  const HopfReport r = hopf_report(ModelParams{0.0, -10.0}, RetardedControl{0.25, kPi / 4, 2 * kPi}, point,
                                   Approach::PyragasLeft);
  const io::Json j = io::hopf_json(r);
  CHECK(j.dump() == io::hopf_json(r).dump());
  CHECK(j.contains("mu2"));

  const io::Json f = io::floquet_json(floquet_uncontrolled(ModelParams{-1.0, 0.0}));
  CHECK(f.contains("multipliers"));
}

TEST_CASE("chart outputs") {
  const Chart chart = neutral_chart(-10.0, kPi / 4, kPi / 4, GridSpec{-0.3, 0.8, -0.8, 0.45, 8, 8});
  std::ostringstream a, b;
  io::write_chart_csv(a, chart);
  io::write_chart_csv(b, chart);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("i,j,x,y,", 0) == 0);

  const std::string svg = io::chart_svg(chart);
  CHECK(svg == io::chart_svg(chart));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);

  const Chart single = neutral_chart(-10.0, kPi / 4, kPi / 4, GridSpec{0.2, 0.3, -0.2, -0.15, 1, 1});
  const std::string one = io::chart_svg(single);
  CHECK(one.find("fill=\"#9ecae1\"") == std::string::npos);
  CHECK(one.find("</svg>") != std::string::npos);
}
