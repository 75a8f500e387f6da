#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pyragas/hopf.hpp"

using namespace pyragas;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex q_dot(const Vector2c<double>& q, const Matrix2c<double>& m, const Vector2c<double>& p) {
  return q.transpose() * m * p;
}

}  // namespace

TEST_CASE("Hopf vectors") {
  const HopfPoint point = pyragas_hopf_point();
  CHECK(point.lambda0 == 0.0);
  CHECK(point.tau0 == doctest::Approx(kTwoPi));

  const HopfVectors v0 = hopf_vectors_closed_form(RetardedControl{0.0, 0.3, kTwoPi}, point);
  CHECK(std::abs(v0.alpha - 0.5) < 1e-14);

  for (double K : {0.1, -0.05, 0.3}) {
    for (double beta : {0.0, kPi / 4, -2.0}) {
      const RetardedControl c{K, beta, kTwoPi};
      const HopfVectors closed = hopf_vectors_closed_form(c, point);
      CHECK(std::abs(closed.alpha - 1.0 / (2.0 * (1.0 + kTwoPi * K * unit_phase(beta)))) < 1e-12);

      const HopfVectors v = hopf_vectors(ModelParams{0.0, -10.0}, c, point);
      const Matrix2c<double> delta = characteristic_matrix(kI, ModelParams{0.0, -10.0}, c);
      CHECK((delta * v.p).norm() < 1e-12);
      CHECK((v.q.transpose() * delta).norm() < 1e-12);
      CHECK(std::abs(v.p(0) - 1.0) < 1e-14);
      CHECK(std::abs(q_dot(v.q, characteristic_matrix_dmu(kI, c), v.p) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("transversality") {
  const HopfPoint point = pyragas_hopf_point();
  const RetardedControl off{0.0, 0.0, kTwoPi};
  CHECK(transversality(off, point, Approach::PyragasLeft, -10.0) == doctest::Approx(-1.0));
  CHECK(transversality(off, point, Approach::LambdaAxis, -10.0) == doctest::Approx(-1.0));

  for (double gamma : {-10.0, 0.5, 3.0}) {
    const RetardedControl c{0.2, 0.7, kTwoPi};
    const double left = transversality(c, point, Approach::PyragasLeft, gamma);
    const double right = transversality(c, point, Approach::PyragasRight, gamma);
    CHECK(std::abs(left + right) < 1e-14);
    const HopfVectors v = hopf_vectors(ModelParams{0.0, gamma}, c, point);
    CHECK(transversality_from_vectors(c, point, Approach::PyragasLeft, gamma, v) ==
          doctest::Approx(left).epsilon(1e-10));
  }
}

TEST_CASE("cubic coefficient") {
  const HopfPoint point = pyragas_hopf_point();
  const RetardedControl off{0.0, 0.0, kTwoPi};
  CHECK(std::abs(cubic_c_closed_form(0.0, off, point) - 4.0) < 1e-13);

  for (double gamma : {-10.0, 2.0}) {
    for (double K : {0.0, 0.25, -0.1}) {
      const double beta = kPi / 4;
      const RetardedControl c{K, beta, kTwoPi};
      const Complex closed = cubic_c_closed_form(gamma, c, point);
      const Complex expect = 4.0 * Complex{1.0, gamma} / (1.0 + kTwoPi * K * unit_phase(beta));
      CHECK(std::abs(closed - expect) < 1e-12 * std::abs(expect));
      const double re = 4.0 * (1.0 + kTwoPi * K * (std::cos(beta) + gamma * std::sin(beta))) /
                        std::norm(1.0 + kTwoPi * K * unit_phase(beta));
      CHECK(closed.real() == doctest::Approx(re).epsilon(1e-12));

      const ModelParams p{0.0, gamma};
      const Complex generic = cubic_c(p, c, point, hopf_vectors(p, c, point));
      CHECK(std::abs(generic - closed) < 1e-10 * std::abs(closed));
    }
  }
}

TEST_CASE("mu2 on the Pyragas curve") {
  const HopfPoint point = pyragas_hopf_point();
  for (double K : {0.0, 0.25, -0.08}) {
    for (double beta : {0.0, kPi / 4, 2.5}) {
      const RetardedControl c{K, beta, kTwoPi};
      const ModelParams p{0.0, -10.0};
      const Mu2Result left = mu2(p, c, point, Approach::PyragasLeft);
      const Mu2Result right = mu2(p, c, point, Approach::PyragasRight);
      CHECK(left.mu2 == doctest::Approx(-4.0).epsilon(1e-10));
      CHECK(right.mu2 == doctest::Approx(4.0).epsilon(1e-10));
      CHECK(left.direction == Direction::Subcritical);
      CHECK(right.direction == Direction::Supercritical);
    }
  }
}

TEST_CASE("mu2 along the lambda axis") {
  const HopfPoint point = pyragas_hopf_point();
  for (double gamma : {-10.0, 0.0, 4.0}) {
    for (double K : {0.05, 0.25, -0.1}) {
      for (double beta : {0.3, kPi / 4, -1.2}) {
        const RetardedControl c{K, beta, kTwoPi};
        if (1.0 + kTwoPi * K * std::cos(beta) <= 0.05) continue;
        const double expect = mu2_lambda_axis_closed_form(K, beta, gamma, kTwoPi, kTwoPi);
        const double got = mu2(ModelParams{0.0, gamma}, c, point, Approach::LambdaAxis).mu2;
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
  // K = 0 reduces to the uncontrolled value.
  CHECK(mu2(ModelParams{0.0, 3.0}, RetardedControl{0.0, 1.0, kTwoPi}, point, Approach::LambdaAxis).mu2 ==
        doctest::Approx(-4.0));
}

TEST_CASE("degenerate Hopf point") {
  const RetardedControl c{-1.0 / kTwoPi, 0.0, kTwoPi};
  CHECK_THROWS_AS(mu2(ModelParams{0.0, -10.0}, c, pyragas_hopf_point(), Approach::LambdaAxis),
                  SimplicityViolation);
}

TEST_CASE("Hopf curve conditions") {
  const HopfCurveResult r = hopf_curve_conditions(RetardedControl{0.0, 0.0, 1.0}, kTwoPi);
  CHECK(r.occurs);
  CHECK(r.multiplicity == 1);
  CHECK(r.non_resonant);
  CHECK(r.point.lambda0 == 0.0);
  CHECK(r.point.tau0 == doctest::Approx(kTwoPi));

  for (double phi : {1.0, kTwoPi, 4.0}) {
    const RetardedControl c{0.2, 0.9, 1.0};
    const HopfCurveResult h = hopf_curve_conditions(c, phi);
    const CharFunction f =
        CharFunction::controlled(ModelParams{h.point.lambda0, 0.0}, RetardedControl{c.K, c.beta, h.point.tau0});
    CHECK(std::abs(f(kI * h.point.omega0)) < 1e-12);
  }
  CHECK_THROWS_AS(hopf_curve_conditions(RetardedControl{0.2, 0.9, 1.0}, 0.0), DomainError);
}

TEST_CASE("root tendency along the extended curve") {
  CHECK(root_tendency(RetardedControl{0.0, 0.0, kTwoPi}, -10.0) == doctest::Approx(1.0));

  const RetardedControl stabilising{0.25, kPi / 4, kTwoPi};
  CHECK(root_tendency(stabilising, -10.0) < 0);
  CHECK(sign_expression(stabilising, -10.0) < 0);
  CHECK(std::signbit(root_tendency(stabilising, -10.0)) == std::signbit(sign_expression(stabilising, -10.0)));

  const NeutralControl reduced{0.25, kPi / 4, 0.0, 1.0, kTwoPi};
  CHECK(root_tendency_neutral(reduced, -10.0) == doctest::Approx(root_tendency(stabilising, -10.0)));
  CHECK(sign_expression(reduced, -10.0) == doctest::Approx(sign_expression(stabilising, -10.0)));

  CHECK_THROWS_AS(root_tendency(RetardedControl{-1.0 / kTwoPi, 0.0, kTwoPi}, 1.0), SimplicityViolation);

  const NeutralControl n{0.1, 0.5, 0.2, -0.3, kTwoPi};
  const double tracked = tracked_tendency(extended_pyragas_family(2.0, n));
  CHECK(std::abs(tracked - root_tendency_neutral(n, 2.0)) <= 1e-6);
}

TEST_CASE("orbit verdicts") {
  const ModelParams p{-0.005, -10.0};
  CHECK(orbit_verdict(p, RetardedControl{0.0, 0.0, 1.0}).verdict == OrbitVerdict::Unstable);

  const OrbitVerdictReport s = orbit_verdict(p, RetardedControl{0.25, kPi / 4, 1.0});
  CHECK(s.verdict == OrbitVerdict::Stable);
  CHECK(s.certificate.sign_negative);
  CHECK(s.certificate.spectral_gap);

  const OrbitVerdictReport n = orbit_verdict(p, NeutralControl{0.25, kPi / 4, 0.0, 0.0, 1.0});
  CHECK(n.verdict == s.verdict);

  const OrbitVerdictReport big = orbit_verdict(ModelParams{-0.15, 1.0}, RetardedControl{0.25, kPi / 4, 1.0});
  CHECK(big.certificate.large_lambda_warning);
}
