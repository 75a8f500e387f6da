#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pyragas/charts.hpp"

using namespace pyragas;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
const Complex kI{0.0, 1.0};

}  // namespace

TEST_CASE("retarded necessary condition") {
  const NecessaryCondition off = necessary_condition(ModelParams{-0.01, -10.0}, RetardedControl{0.0, 0.3, 1.0});
  CHECK(off.value == 1.0);
  CHECK_FALSE(off.satisfied);

  const NecessaryCondition on = necessary_condition(ModelParams{-0.005, -10.0}, RetardedControl{0.25, kPi / 4, 1.0});
  CHECK(on.value < 0);
  CHECK(on.satisfied);
}

TEST_CASE("neutral boundary puts i omega on the axis") {
  const std::vector<double> omegas{0.1, 0.5, 0.9, 1.0, 1.3, 1.9};
  for (double beta : {kPi / 4, -1.0, 2.0}) {
    for (const BoundarySample& s : ndde_boundary(beta, omegas)) {
      const NeutralControl n{s.K1, beta, s.K2, beta, kTwoPi};
      const Complex mu = kI * s.omega;
      const double scale = 1.0 + s.omega + std::abs(s.K1) + std::abs(s.K2) * s.omega;
      CHECK(std::abs(char_neutral(mu, ModelParams{0.0, -10.0}, n)) <= 1e-8 * scale);
    }
  }
  for (const BoundarySample& s : ndde_boundary(kPi / 4, 0.3, omegas)) {
    const NeutralControl n{s.K1, kPi / 4, s.K2, 0.3, kTwoPi};
    CHECK(std::abs(char_neutral(kI * s.omega, ModelParams{0.0, 1.0}, n)) <= 1e-8 * (1.0 + std::abs(s.K1) + std::abs(s.K2)));
  }
}

TEST_CASE("boundary limit at omega = 1") {
  const double beta = kPi / 4;
  const auto samples = ndde_boundary(beta, {1.0 - 1e-6, 1.0, 1.0 + 1e-6});
  REQUIRE(samples.size() == 3);
  CHECK(samples[1].K1 == doctest::Approx(std::cos(kPi - beta) / kTwoPi));
  CHECK(std::abs(samples[1].K1 - samples[0].K1) < 1e-5);
  CHECK(std::abs(samples[1].K1 - samples[2].K1) < 1e-5);
  CHECK(std::abs(samples[1].K2 - samples[0].K2) < 1e-5);
  CHECK(std::abs(samples[1].K2 - samples[2].K2) < 1e-5);
}

TEST_CASE("boundary at beta = pi/2, omega = 1/2") {
  const auto s = ndde_boundary(kPi / 2, {0.5});
  REQUIRE(s.size() == 1);
  CHECK(s[0].K1 == doctest::Approx(0.25));
  CHECK(std::abs(s[0].K2) < 1e-14);
}

TEST_CASE("default frequencies") {
  const auto w = default_omegas(400);
  CHECK(std::find(w.begin(), w.end(), 1.0) != w.end());
  for (double x : w) {
    CHECK(x > 0.0);
    CHECK(x < 2.0);
  }
}

TEST_CASE("point in polygon") {
  const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(point_in_polygon(square, {0.5, 0.5}));
  CHECK_FALSE(point_in_polygon(square, {1.5, 0.5}));
}

TEST_CASE("grid") {
  const GridSpec g{0.0, 1.0, -1.0, 1.0, 3, 1};
  CHECK(g.x(0) == 0.0);
  CHECK(g.x(2) == 1.0);
  CHECK(g.y(0) == 0.0);
  CHECK_THROWS_AS(validate(GridSpec{0.0, 1.0, 0.0, 1.0, 0, 2}), DomainError);
}

TEST_CASE("neutral chart with equal phases") {
  const GridSpec grid{-0.3, 0.8, -0.8, 0.45, 60, 60};
  const Chart chart = neutral_chart(-10.0, kPi / 4, kPi / 4, grid);
  CHECK(chart.mode_used == InsideMode::Polygon);
  CHECK_FALSE(chart.loop.empty());
  CHECK(chart.stable_count() > 0);
  for (const RegionCell& c : chart.cells) {
    CHECK((c.verdict == CellVerdict::Stable) == (c.inside_boundary && c.stable_d && c.sign_condition));
  }

  // The cell nearest zero gain is unstable: without control the orbit is.
  const Chart origin = neutral_chart(-10.0, kPi / 4, kPi / 4, GridSpec{-1e-3, 1e-3, -1e-3, 1e-3, 1, 1});
  CHECK(origin.cells.front().verdict == CellVerdict::Unstable);

  SUBCASE("polygon and census agree away from the boundary") {
    ChartOptions census;
    census.mode = InsideMode::Census;
    const GridSpec coarse{-0.3, 0.8, -0.8, 0.45, 12, 12};
    const Chart a = neutral_chart(-10.0, kPi / 4, kPi / 4, coarse);
    const Chart b = neutral_chart(-10.0, kPi / 4, kPi / 4, coarse, census);
    int differ = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k) differ += a.cells[k].verdict != b.cells[k].verdict;
    CHECK(differ <= 2);
  }
}

TEST_CASE("neutral chart with distinct phases") {
  const Chart chart = neutral_chart(-10.0, kPi / 4, 0.0, GridSpec{-0.3, 0.8, -0.8, 0.45, 30, 30});
  CHECK(chart.mode_used == InsideMode::Census);
  CHECK(chart.stable_count() > 0);
}

TEST_CASE("retarded chart") {
  const GridSpec grid{-0.1, -0.001, -0.3, 0.8, 30, 23};
  const Chart chart = retarded_chart(-10.0, kPi / 4, grid);
  CHECK(chart.stable_count() > 0);

  // Row nearest K = 0 (y spacing 0.05 puts a node at K = 0).
  int zero_row = -1;
  for (int j = 0; j < grid.ny; ++j) {
    if (std::abs(grid.y(j)) < 1e-12) zero_row = j;
  }
  REQUIRE(zero_row >= 0);
  for (int i = 0; i < grid.nx; ++i) CHECK(chart.at(i, zero_row).verdict == CellVerdict::Unstable);

  bool moderate_stable = false;
  for (int j = 0; j < grid.ny; ++j) {
    if (grid.y(j) > 0.15 && grid.y(j) < 0.4 && chart.at(grid.nx - 1, j).verdict == CellVerdict::Stable) {
      moderate_stable = true;
    }
  }
  CHECK(moderate_stable);
  CHECK_THROWS_AS(retarded_chart(-10.0, kPi / 4, GridSpec{-0.1, 0.1, 0.0, 1.0, 4, 4}), DomainError);
}

TEST_CASE("cross-validation against simulation") {
  const Chart chart = neutral_chart(-10.0, kPi / 4, kPi / 4, GridSpec{-0.3, 0.8, -0.8, 0.45, 40, 40});
  const CrossValidateReport r = cross_validate(chart);
  CHECK(r.compared > 0);
  CHECK(r.agreement() >= 0.9);
}
