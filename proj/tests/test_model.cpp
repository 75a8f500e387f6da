#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "pyragas/model.hpp"

using namespace pyragas;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
const Complex kI{0.0, 1.0};
}  // namespace

TEST_CASE("uncontrolled field") {
  CHECK(uncontrolled_rhs(Complex{}, ModelParams{-0.3, 2.0}) == Complex{});

  // (lambda + i) z + (1 + i gamma)|z|^2 z at z = 1, lambda = -1, gamma = 0.
  const Complex v = uncontrolled_rhs(Complex{1.0, 0.0}, ModelParams{-1.0, 0.0});
  CHECK(v.real() == doctest::Approx(0.0));
  CHECK(v.imag() == doctest::Approx(1.0));

  // Independent scalar evaluation of the same formula at a generic point.
  const double lam = -0.4, gam = 3.0, x = 0.3, y = -0.7;
  const double r2 = x * x + y * y;
  const double re = lam * x - y + r2 * (x - gam * y);
  const double im = x + lam * y + r2 * (gam * x + y);
  const Complex w = uncontrolled_rhs(Complex{x, y}, ModelParams{lam, gam});
  CHECK(w.real() == doctest::Approx(re).epsilon(1e-14));
  CHECK(w.imag() == doctest::Approx(im).epsilon(1e-14));
}

TEST_CASE("orbit solves the uncontrolled equation") {
  const ModelParams p{-0.3, 1.5};
  const PeriodicOrbit orbit = periodic_orbit(p);
  for (double t : {0.0, 0.7, 3.1, 10.0}) {
    const Complex z = orbit.at(t);
    CHECK(std::abs(uncontrolled_rhs(z, p) - kI * orbit.omega * z) < 1e-14);
  }
}

TEST_CASE("controlled field") {
  const ModelParams p{-0.2, -3.0};
  const Complex z{0.4, -0.1}, zd{-0.2, 0.5};
  CHECK(controlled_rhs(z, zd, p, RetardedControl{0.0, 1.0, 2.0}) == uncontrolled_rhs(z, p));
  CHECK(controlled_rhs(z, z, p, RetardedControl{0.8, -2.0, 2.0}) == uncontrolled_rhs(z, p));

  const PeriodicOrbit orbit = periodic_orbit(p);
  const RetardedControl c{0.6, 0.9, orbit.period};
  for (double t : {0.0, 1.3, 7.7}) {
    const Complex z_now = orbit.at(t);
    const Complex v = controlled_rhs(z_now, orbit.at(t - orbit.period), p, c);
    CHECK(std::abs(v - kI * orbit.omega * z_now) < 1e-12);
  }
}

TEST_CASE("neutral field") {
  const ModelParams p{-0.2, -3.0};
  const Complex z{0.4, -0.1}, zd{-0.2, 0.5}, dd{1.0, 2.0};
  const NeutralControl off{0.7, 0.3, 0.0, 1.1, 3.0};
  CHECK(std::abs(neutral_rhs(z, zd, dd, p, off) - controlled_rhs(z, zd, p, off.retarded_part())) < 1e-15);

  const PeriodicOrbit orbit = periodic_orbit(p);
  const NeutralControl n{0.6, 0.9, 0.3, -2.0, orbit.period};
  const double t = 2.2;
  const Complex v = neutral_rhs(orbit.at(t), orbit.at(t - orbit.period),
                                orbit.derivative_at(t - orbit.period), p, n);
  CHECK(std::abs(v - kI * orbit.omega * orbit.at(t)) < 1e-12);

  const Complex half = neutral_rhs(Complex{}, Complex{}, Complex{1.0, 0.0}, ModelParams{0.0, 0.0},
                                   NeutralControl{0.0, 0.0, 1.0, 0.0, 1.0});
  CHECK(half.real() == doctest::Approx(0.5));
  CHECK(half.imag() == doctest::Approx(0.0));

  CHECK_THROWS_AS(neutral_rhs(z, zd, dd, p, NeutralControl{0.0, 0.0, 1.0, kPi, 1.0}),
                  DenominatorZero);
}

TEST_CASE("rotational equivariance") {
  const ModelParams p{0.1, 4.0};
  const RetardedControl c{0.5, -1.0, 3.0};
  const Complex rot = unit_phase(0.83);
  const Complex z{0.3, 0.2}, zd{-0.6, 0.1};
  CHECK(std::abs(controlled_rhs(rot * z, rot * zd, p, c) - rot * controlled_rhs(z, zd, p, c)) < 1e-15);
}

TEST_CASE("periodic orbit") {
  const PeriodicOrbit o = periodic_orbit(ModelParams{-1.0, 0.0});
  CHECK(o.radius == doctest::Approx(1.0));
  CHECK(o.omega == doctest::Approx(1.0));
  CHECK(o.period == doctest::Approx(kTwoPi));

  CHECK_THROWS_AS(periodic_orbit(ModelParams{-0.25, -10.0}), DomainError);
  CHECK_THROWS_AS(periodic_orbit(ModelParams{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(periodic_orbit(ModelParams{0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(periodic_orbit(ModelParams{-0.1, -10.0}), DomainError);

  const PeriodicOrbit small = periodic_orbit(ModelParams{-1e-10, -10.0});
  CHECK(small.radius < 1e-4);
  CHECK(small.period == doctest::Approx(kTwoPi).epsilon(1e-8));
}

TEST_CASE("curves in the (lambda, tau) plane") {
  const ParameterPoint a = curve_point(CurveKind::ExtendedPyragasCurve, 0.0, CurveContext{-10.0, 0, 0});
  CHECK(a.lambda == 0.0);
  CHECK(a.tau == doctest::Approx(kTwoPi));

  const ParameterPoint b = pyragas_curve_point(-0.05, -10.0);
  CHECK(b.tau == doctest::Approx(kTwoPi / 0.5));
  CHECK_THROWS_AS(pyragas_curve_point(0.0, -10.0), DomainError);
  CHECK_THROWS_AS(extended_pyragas_curve_point(0.5, 2.0), DomainError);
  CHECK_THROWS_AS(extended_pyragas_curve_point(-0.2, -5.0), DomainError);

  for (double K : {0.0, 0.3, -1.2}) {
    for (double beta : {0.0, 1.0, -2.5, kPi}) {
      const ParameterPoint h = hopf_curve_point(kTwoPi, K, beta);
      CHECK(std::abs(h.lambda) < 1e-14);
      CHECK(h.tau == doctest::Approx(kTwoPi).epsilon(1e-14));
    }
  }
  const ParameterPoint h = curve_point(CurveKind::HopfCurve, kPi, CurveContext{0.0, 0.0, 0.7});
  CHECK(h.lambda == 0.0);
  CHECK(h.tau == doctest::Approx(kPi));
  CHECK_THROWS_AS(hopf_curve_point(0.0, 0.3, 0.1), DomainError);
}

TEST_CASE("real form") {
  const ModelParams p{-0.4, 2.0};
  const RealForm off = real_form(p, RetardedControl{0.0, 0.3, 2.0});
  Matrix2<double> expect;
  expect << -0.4, -1.0, 1.0, -0.4;
  CHECK((off.A - expect).norm() < 1e-15);
  Eigen::EigenSolver<Matrix2<double>> es(off.A);
  for (int k = 0; k < 2; ++k) {
    CHECK(es.eigenvalues()(k).real() == doctest::Approx(-0.4));
    CHECK(std::abs(es.eigenvalues()(k).imag()) == doctest::Approx(1.0));
  }

  const RealForm f = real_form(p, RetardedControl{0.7, 0.0, 2.0});
  CHECK((f.B - 0.7 * Matrix2<double>::Identity()).norm() < 1e-15);
  CHECK((f.C + f.C.transpose() - 2 * Matrix2<double>::Identity()).norm() < 1e-15);
  CHECK(f.C.determinant() == doctest::Approx(5.0));

  const RealForm g = real_form(p, RetardedControl{0.7, -1.3, 2.0});
  const Complex z{0.3, -0.8}, zd{0.1, 0.4};
  const Vector2<double> v = real_form_rhs(Vector2<double>{z.real(), z.imag()},
                                          Vector2<double>{zd.real(), zd.imag()}, g);
  const Complex w = controlled_rhs(z, zd, p, RetardedControl{0.7, -1.3, 2.0});
  CHECK(std::abs(v(0) - w.real()) < 1e-15);
  CHECK(std::abs(v(1) - w.imag()) < 1e-15);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(RetardedControl{0.1, 4.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(RetardedControl{0.1, -3.5, 1.0}), DomainError);
  CHECK_NOTHROW(validate(RetardedControl{0.1, kPi, 1.0}));
  CHECK_THROWS_AS(validate(RetardedControl{0.1, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate(ModelParams{NAN, 0.0}), DomainError);
  CHECK_THROWS_AS(validate(NeutralControl{0.0, 0.0, -1.0, 0.0, 1.0}), DenominatorZero);
}
