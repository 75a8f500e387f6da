#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pyragas/integrator.hpp"

using namespace pyragas;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
const Complex kI{0.0, 1.0};

double max_radial_error(const Trajectory& tr, double radius, double t_max) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.node_time(k + 1) > t_max + 1e-12) break;
    worst = std::max(worst, std::abs(std::abs(tr.segments()[k].z1) - radius));
  }
  return worst;
}

DeviationSeries synthetic(double rate) {
  DeviationSeries s;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    s.t.push_back(t);
    s.radial.push_back(std::exp(rate * t));
    s.phase.push_back(0.0);
  }
  return s;
}

}  // namespace

TEST_CASE("ODE equilibrium stays at zero") {
  const Trajectory tr = integrate_ode(ModelParams{0.3, -2.0}, Complex{}, 10.0, 0.01);
  for (const auto& s : tr.segments()) CHECK(s.z1 == Complex{});
}

// The unit circle is invariant for lambda = -1, gamma = 0, but the orbit is
// radially unstable with exponent 2, so any discretisation or rounding error
// grows like e^{2t} along the requested horizon.
TEST_CASE("invariant circle over twenty periods") {
  const Trajectory tr = integrate_ode(ModelParams{-1.0, 0.0}, Complex{1.0, 0.0}, 20 * kTwoPi, 1e-3);
  CHECK_FALSE(tr.escaped());
  CHECK(max_radial_error(tr, 1.0, 20 * kTwoPi) <= 1e-6);
}

TEST_CASE("linear growth near the equilibrium") {
  const Trajectory tr = integrate_ode(ModelParams{0.1, 0.0}, Complex{1e-3, 0.0}, 10.0, 1e-3);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.node_time(k + 1);
    const double ratio = std::abs(tr.segments()[k].z1) / (1e-3 * std::exp(0.1 * t));
    REQUIRE(std::abs(ratio - 1.0) < 0.05);
  }
}

TEST_CASE("fourth-order convergence") {
  const ModelParams p{-0.5, 1.5};
  const Complex z0{0.2, 0.1};
  auto end = [&](double h) { return integrate_ode(p, z0, 2.0, h).segments().back().z1; };
  const Complex ref = end(1.0 / 640);
  const double e1 = std::abs(end(0.05) - ref);
  const double e2 = std::abs(end(0.025) - ref);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("DDE on the orbit with matched delay") {
  const ModelParams p{-0.05, -10.0};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const RetardedControl c{0.3, 0.785, orbit.period};
  const Trajectory tr = integrate_dde(p, c, orbit_history(orbit), orbit.period, orbit.period / 1000);
  CHECK(max_radial_error(tr, orbit.radius, orbit.period) <= 1e-8);
  CHECK(std::abs(tr.segments().back().z1 - orbit.at(orbit.period)) <= 1e-8);
}

TEST_CASE("DDE with zero gain matches the ODE") {
  const ModelParams p{-0.2, 3.0};
  const Complex z0{0.3, -0.2};
  const double h = 0.01;
  const Trajectory a = integrate_dde(p, RetardedControl{0.0, 0.4, 1.0}, constant_history(z0), 5.0, h);
  const Trajectory b = integrate_ode(p, z0, 5.0, h);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(a.segments()[k].z1 - b.segments()[k].z1) <= 1e-10);
  }
}

TEST_CASE("zero history stays zero") {
  const ModelParams p{0.2, 1.0};
  const Trajectory a = integrate_dde(p, RetardedControl{0.5, 1.0, 2.0}, constant_history(Complex{}), 10.0, 0.02);
  const Trajectory b = integrate_ndde(p, NeutralControl{0.5, 1.0, 0.3, -1.0, 2.0}, constant_history(Complex{}), 10.0, 0.02);
  for (const auto& s : a.segments()) CHECK(s.z1 == Complex{});
  for (const auto& s : b.segments()) CHECK(s.z1 == Complex{});
}

TEST_CASE("NDDE") {
  const ModelParams p{-0.05, -10.0};
  const PeriodicOrbit orbit = periodic_orbit(p);

  SUBCASE("orbit with matched delay") {
    const NeutralControl n{0.2, 0.785, 0.2, 0.785, orbit.period};
    const Trajectory tr = integrate_ndde(p, n, orbit_history(orbit), orbit.period, orbit.period / 1000);
    CHECK(max_radial_error(tr, orbit.radius, orbit.period) <= 1e-8);
  }
  SUBCASE("zero neutral gain matches the DDE") {
    const NeutralControl n{0.25, 0.785, 0.0, 2.0, orbit.period};
    const HistoryFunction hist = perturbed_orbit_history(orbit, 0.05, 0.02);
    const double h = orbit.period / 200;
    const Trajectory a = integrate_ndde(p, n, hist, 4 * orbit.period, h);
    const Trajectory b = integrate_dde(p, n.retarded_part(), hist, 4 * orbit.period, h);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::abs(a.segments()[k].z1 - b.segments()[k].z1) <= 1e-10);
    }
  }
  SUBCASE("singular leading coefficient") {
    const NeutralControl n{0.0, 0.0, -1.0, 0.0, 1.0};
    CHECK_THROWS_AS(integrate_ndde(p, n, constant_history(Complex{0.1, 0}), 2.0, 0.01), DenominatorZero);
  }
}

TEST_CASE("method of steps") {
  const ModelParams p{-0.1, 2.0};
  const RetardedControl c{0.4, -0.6, 3.0};
  const HistoryFunction hist = constant_history(Complex{0.2, 0.1});
  const double h = c.tau / 100;
  const Trajectory whole = integrate_dde(p, c, hist, 2 * c.tau, h);
  Trajectory part = integrate_dde(p, c, hist, c.tau, h);
  extend_dde(part, p, c, 2 * c.tau);
  REQUIRE(whole.size() == part.size());
  CHECK(std::abs(whole.segments().back().z1 - part.segments().back().z1) <= 1e-10);

  CHECK_THROWS_AS(integrate_dde(p, c, hist, 5.0, 0.07), DomainError);
  CHECK_THROWS_AS(integrate_dde(p, c, HistoryFunction{}, 5.0, 0.03), DomainError);
}

TEST_CASE("dense output") {
  const ModelParams p{-0.05, -10.0};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const RetardedControl c{0.3, 0.785, orbit.period};
  const Trajectory tr = integrate_dde(p, c, orbit_history(orbit), orbit.period, orbit.period / 1000);
  for (double t : {-0.5 * orbit.period, 0.123, 2.5, 0.999 * orbit.period}) {
    const StateSample s = tr.query(t);
    CHECK(std::abs(s.value - orbit.at(t)) <= 1e-8);
    CHECK(std::abs(s.derivative - orbit.derivative_at(t)) <= 1e-6);
  }
  CHECK_THROWS_AS(tr.query(2 * orbit.period), DomainError);
}

TEST_CASE("variational linearity") {
  const ModelParams p{-0.05, -10.0};
  const RetardedControl c{0.25, 0.785, kTwoPi};
  const Complex w0{0.3, -0.4};
  const double h = kTwoPi / 200;
  const Trajectory a = integrate_variational(p, c, constant_history(w0), 3 * kTwoPi, h);
  const Trajectory b = integrate_variational(p, c, constant_history(2.0 * w0), 3 * kTwoPi, h);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(std::abs(2.0 * a.segments()[k].z1 - b.segments()[k].z1) <= 1e-10);
  }
}

TEST_CASE("perturbed orbit history") {
  const PeriodicOrbit orbit = periodic_orbit(ModelParams{-0.04, 2.0});
  const HistoryFunction exact = perturbed_orbit_history(orbit, 0.0, 0.0);
  CHECK(exact(-1.3).value == orbit.at(-1.3));

  const HistoryFunction h = perturbed_orbit_history(orbit, 0.05, 0.02);
  const Complex factor{1.05, 0.02};
  CHECK(std::abs(h(0.0).value) == doctest::Approx(orbit.radius * std::abs(factor)));
  CHECK(std::abs(h(0.0).derivative - orbit.radius * kI * orbit.omega * factor) < 1e-15);
  CHECK_THROWS_AS(perturbed_orbit_history(orbit, 0.6, 0.0), DomainError);
}

TEST_CASE("deviation series") {
  const ModelParams p{-0.05, -10.0};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const RetardedControl c{0.3, 0.785, orbit.period};

  const Trajectory on = integrate_dde(p, c, orbit_history(orbit), orbit.period, orbit.period / 1000);
  const DeviationSeries d = deviation(on, orbit, orbit.period / 50);
  for (std::size_t k = 0; k < d.size(); ++k) {
    CHECK(std::abs(d.radial[k]) <= 1e-8);
    CHECK(std::abs(d.phase[k]) <= 1e-6);
  }

  const HistoryFunction scaled = perturbed_orbit_history(orbit, 0.1, 0.0);
  const Trajectory off = integrate_dde(p, c, scaled, orbit.period, orbit.period / 1000);
  CHECK(deviation(off, orbit, orbit.period / 50).radial.front() == doctest::Approx(0.1 * orbit.radius));

  const Trajectory zero = integrate_dde(p, c, constant_history(Complex{}), 1.0, orbit.period / 1000);
  CHECK_THROWS_AS(deviation(zero, orbit, 0.1), UndefinedPhase);
}

TEST_CASE("diverging run has growing deviation") {
  const ModelParams p{-0.005, -10.0};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const RetardedControl c{0.0, 0.0, orbit.period};
  const Trajectory tr = integrate_dde(p, c, perturbed_orbit_history(orbit, 0.05, 0.0), 30 * orbit.period,
                                      orbit.period / 200, IntegrationOptions{2 * orbit.radius});
  const DeviationSeries d = deviation(tr, orbit, orbit.period / 10);
  for (std::size_t k = 10; k < d.size(); k += 10) CHECK(d.radial[k] > d.radial[k - 10]);
  CHECK(classify(d, 30 * orbit.period) == StabilityVerdict::Diverging);
}

TEST_CASE("classification of synthetic series") {
  CHECK(classify(synthetic(-1.0), 10.0) == StabilityVerdict::Converging);
  CHECK(classify(synthetic(1.0), 10.0) == StabilityVerdict::Diverging);
  CHECK(classify(synthetic(0.0), 10.0) == StabilityVerdict::Inconclusive);

  DeviationSeries escaped = synthetic(0.0);
  escaped.escaped = true;
  CHECK(classify(escaped, 10.0) == StabilityVerdict::Diverging);
  CHECK_THROWS_AS(classify(synthetic(0.0), 20.0), DomainError);
}

TEST_CASE("escape radius stops the integration") {
  IntegrationOptions opts;
  opts.escape_radius = 2.0;
  const Trajectory tr = integrate_ode(ModelParams{0.5, 0.0}, Complex{1.0, 0.0}, 10.0, 0.01, opts);
  CHECK(tr.escaped());
  CHECK(tr.t_end() < 10.0);
}
