#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pyragas/core.hpp"
#include "pyragas/model.hpp"
#include "pyragas/spectrum.hpp"

namespace pyragas {

/// A point (lambda0, tau0) where the origin has the purely imaginary root
/// i*omega0; phi = omega0 * tau0.
struct HopfPoint {
  double lambda0 = 0.0;
  double tau0 = two_pi_v<double>;
  double omega0 = 1.0;
  double phi = two_pi_v<double>;
};

/// The Pyragas endpoint (0, 2 pi) with omega0 = 1.
HopfPoint pyragas_hopf_point();

struct HopfVectors {
  Vector2c<double> p;
  Vector2c<double> q;
  Complex alpha;
};

/// Direction along which the Hopf point is crossed.
enum class Approach { PyragasLeft, PyragasRight, LambdaAxis };
enum class Direction { Subcritical, Supercritical };

const char* to_string(Approach a);
const char* to_string(Direction d);

// ---------------------------------------------------------------------------
// Characteristic matrix of the real form, Delta(mu) = mu I - A - B e^{-mu tau}

template <typename Scalar>
Matrix2c<Scalar> characteristic_matrix(std::complex<Scalar> mu, const ModelParamsT<Scalar>& p,
                                       const RetardedControlT<Scalar>& c) {
  const RealFormT<Scalar> f = real_form(p, c);
  const std::complex<Scalar> decay = std::exp(-mu * c.tau);
  Matrix2c<Scalar> m = mu * Matrix2c<Scalar>::Identity();
  m -= f.A.template cast<std::complex<Scalar>>();
  m -= decay * f.B.template cast<std::complex<Scalar>>();
  return m;
}

/// d Delta / d mu.
template <typename Scalar>
Matrix2c<Scalar> characteristic_matrix_dmu(std::complex<Scalar> mu,
                                           const RetardedControlT<Scalar>& c) {
  const std::complex<Scalar> decay = std::exp(-mu * c.tau);
  Matrix2c<Scalar> b = (c.K * rotation(c.beta)).template cast<std::complex<Scalar>>();
  return Matrix2c<Scalar>::Identity() + (c.tau * decay) * b;
}

/// Rates (d lambda, d tau) per unit of the curve parameter at the Hopf point.
struct ParameterRates {
  double dlambda = 1.0;
  double dtau = 0.0;
};
ParameterRates parameter_rates(Approach a, double gamma, const HopfPoint& point);

/// d Delta / d theta along the approach.
Matrix2c<double> characteristic_matrix_dparam(Complex mu, const RetardedControl& c,
                                              const ParameterRates& rates);

// ---------------------------------------------------------------------------
// Closed forms

/// 1 + K tau e^{i(beta - phi)}; its vanishing makes i*omega0 a double root.
template <typename Scalar>
std::complex<Scalar> simplicity_factor(Scalar K, Scalar beta, Scalar tau, Scalar phi) {
  return Scalar(1) + K * tau * unit_phase(beta - phi);
}

template <typename Scalar>
Scalar root_tendency_value(Scalar K, Scalar beta, Scalar gamma) {
  using std::cos;
  using std::norm;
  using std::sin;
  const Scalar tau = two_pi_v<Scalar>;
  return (1 + tau * K * (cos(beta) + gamma * sin(beta))) / norm(simplicity_factor(K, beta, tau, Scalar(0)));
}

template <typename Scalar>
Scalar mu2_lambda_axis_closed_form(Scalar K, Scalar beta, Scalar gamma, Scalar tau, Scalar phi) {
  using std::cos;
  using std::sin;
  return -4 * (1 + K * tau * (cos(beta - phi) + gamma * sin(beta - phi))) /
         (1 + K * tau * cos(beta - phi));
}

HopfVectors hopf_vectors_closed_form(const RetardedControl& c, const HopfPoint& point);
Complex cubic_c_closed_form(double gamma, const RetardedControl& c, const HopfPoint& point);

// ---------------------------------------------------------------------------
// Generic pipeline

/// Null vectors of Delta(i omega0) found numerically; p is scaled to p0 = 1
/// and q to q . D1Delta p = 1.
HopfVectors hopf_vectors(const ModelParams& p_model, const RetardedControl& c,
                         const HopfPoint& point);
/// Same with lambda taken from the point.
HopfVectors hopf_vectors(const RetardedControl& c, const HopfPoint& point);

/// Closed-form transversality Re(q . D2Delta p). The Pyragas approaches are
/// defined at (0, 2 pi) only.
double transversality(const RetardedControl& c, const HopfPoint& point, Approach approach,
                      double gamma);
/// Re(q . D2Delta p) from the matrices themselves.
double transversality_from_vectors(const RetardedControl& c, const HopfPoint& point,
                                   Approach approach, double gamma, const HopfVectors& v);

/// Symmetric bilinear second derivative D^2 g(0) on C^2.
using Bilinear = std::function<Vector2c<double>(const Vector2c<double>&, const Vector2c<double>&)>;

/// The zero bilinear form (this model has no quadratic terms).
Bilinear zero_bilinear();

/// The cubic normal-form coefficient built from the trilinear third
/// derivative of <x,x> C x and the two quadratic correction terms.
Complex cubic_c(const ModelParams& p_model, const RetardedControl& c, const HopfPoint& point,
                const HopfVectors& v, const Bilinear& d2g = zero_bilinear());

/// Third derivative of g(x) = <x,x> C x as the sum over S3 of
/// <f_s1, f_s2> C f_s3 (bilinear, unconjugated pairing).
Vector2c<double> third_derivative(double gamma, const Vector2c<double>& f1,
                                  const Vector2c<double>& f2, const Vector2c<double>& f3);

struct HopfReport {
  HopfPoint point;
  HopfVectors vectors;
  Approach approach = Approach::PyragasLeft;
  ModelParams model;
  RetardedControl control;
  double transversality = 0.0;
  Complex c;
  double mu2 = 0.0;
  Direction direction = Direction::Subcritical;
};

struct Mu2Result {
  double mu2 = 0.0;
  Direction direction = Direction::Subcritical;
};

Mu2Result mu2(const ModelParams& p_model, const RetardedControl& c, const HopfPoint& point,
              Approach approach);
HopfReport hopf_report(const ModelParams& p_model, const RetardedControl& c,
                       const HopfPoint& point, Approach approach);

// ---------------------------------------------------------------------------
// Hopf curve

struct HopfCurveResult {
  bool occurs = false;
  HopfPoint point;
  bool simple_factor_nonzero = false;  // 1 + K tau e^{i(beta-phi)} != 0
  bool derivative_positive = false;    // 1 + K tau cos(beta-phi) > 0
  int multiplicity = 0;                // small-circle count at i*omega0
  bool non_resonant = false;           // no roots at i k omega0, k != 1, |k omega0| <= 20
};

/// (lambda, tau) on the Hopf curve from phi, with the occurrence checks.
/// c.tau is ignored; it is replaced by the curve value.
HopfCurveResult hopf_curve_conditions(const RetardedControl& c, double phi);

// ---------------------------------------------------------------------------
// Root tendencies along the extended Pyragas curve

double root_tendency(const RetardedControl& c, double gamma);
double root_tendency_neutral(const NeutralControl& n, double gamma);

/// theta -> characteristic function at (theta, 2 pi / (1 - gamma theta)).
CharFamily extended_pyragas_family(double gamma, const RetardedControl& c);
CharFamily extended_pyragas_family(double gamma, const NeutralControl& n);

/// Slope of Re mu along the curve at theta = 0 from tracked roots: central
/// differences at halving steps, extrapolated with a Richardson table.
double tracked_tendency(const CharFamily& family, double step = 1e-3);

// ---------------------------------------------------------------------------
// Orbit verdicts

/// 1 + 2 pi K (cos beta + gamma sin beta), and its neutral analogue.
double sign_expression(const RetardedControl& c, double gamma);
double sign_expression(const NeutralControl& n, double gamma);

enum class OrbitVerdict { Stable, Unstable, Undetermined };
const char* to_string(OrbitVerdict v);

struct VerdictOptions {
  double gap = -1e-4;
  double small_lambda = 0.1;
  double boundary_tolerance = 1e-10;
  FindOptions find{};
};

struct OrbitCertificate {
  double sign_value = 0.0;
  bool sign_negative = false;
  bool census_checked = false;
  bool census_complete = false;
  bool spectral_gap = false;
  std::optional<EssentialSpectrumReport> essential;
  SearchBox box;
  std::vector<Root> roots;
  bool large_lambda_warning = false;
  std::string note;
};

struct OrbitVerdictReport {
  OrbitVerdict verdict = OrbitVerdict::Undetermined;
  OrbitCertificate certificate;
};

OrbitVerdictReport orbit_verdict(const ModelParams& p_model, const RetardedControl& c,
                                 const VerdictOptions& opts = {});
OrbitVerdictReport orbit_verdict(const ModelParams& p_model, const NeutralControl& n,
                                 const VerdictOptions& opts = {});

}  // namespace pyragas
