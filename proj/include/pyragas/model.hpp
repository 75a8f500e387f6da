#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "pyragas/core.hpp"

namespace pyragas {

/// Stuart-Landau normal form parameters: bifurcation parameter and
/// nonlinear frequency shift.
template <typename Scalar>
struct ModelParamsT {
  Scalar lambda{0};
  Scalar gamma{0};
};

/// Pyragas feedback -K e^{i beta} [z(t) - z(t - tau)].
template <typename Scalar>
struct RetardedControlT {
  Scalar K{0};
  Scalar beta{0};
  Scalar tau{two_pi_v<Scalar>};
};

/// Feedback on both the state and its derivative; the derivative term turns
/// the controlled system into a neutral equation.
template <typename Scalar>
struct NeutralControlT {
  Scalar K1{0};
  Scalar beta1{0};
  Scalar K2{0};
  Scalar beta2{0};
  Scalar tau{two_pi_v<Scalar>};

  std::complex<Scalar> gain1() const { return K1 * unit_phase(beta1); }
  std::complex<Scalar> gain2() const { return K2 * unit_phase(beta2); }
  /// 1 + K2 e^{i beta2}, the coefficient of zdot(t) after rearrangement.
  std::complex<Scalar> leading() const { return Scalar(1) + gain2(); }
  /// The retarded control obtained by switching the derivative term off.
  RetardedControlT<Scalar> retarded_part() const { return {K1, beta1, tau}; }
};

/// The rotating wave sqrt(-lambda) e^{i omega t}.
template <typename Scalar>
struct PeriodicOrbitT {
  Scalar radius{0};
  Scalar omega{0};
  Scalar period{0};

  std::complex<Scalar> at(Scalar t) const { return radius * unit_phase(omega * t); }
  std::complex<Scalar> derivative_at(Scalar t) const {
    return imag_unit<Scalar> * omega * at(t);
  }
};

enum class CurveKind { PyragasCurve, ExtendedPyragasCurve, HopfCurve };

/// Extra parameters a curve parametrisation may need: gamma for the Pyragas
/// curves, (K, beta) for the Hopf curve.
template <typename Scalar>
struct CurveContextT {
  Scalar gamma{0};
  Scalar K{0};
  Scalar beta{0};
};

template <typename Scalar>
struct ParameterPointT {
  Scalar lambda;
  Scalar tau;
};

/// Real 2x2 form of the controlled system:
///   xdot = A x + <x, x> C x + B x(t - tau).
template <typename Scalar>
struct RealFormT {
  Matrix2<Scalar> A;
  Matrix2<Scalar> B;
  Matrix2<Scalar> C;
};

using ModelParams = ModelParamsT<double>;
using RetardedControl = RetardedControlT<double>;
using NeutralControl = NeutralControlT<double>;
using PeriodicOrbit = PeriodicOrbitT<double>;
using CurveContext = CurveContextT<double>;
using ParameterPoint = ParameterPointT<double>;
using RealForm = RealFormT<double>;

// ---------------------------------------------------------------------------
// Validation

template <typename Scalar>
void validate(const ModelParamsT<Scalar>& p) {
  using std::isfinite;
  if (!isfinite(p.lambda) || !isfinite(p.gamma)) {
    throw DomainError("model parameters must be finite");
  }
}

template <typename Scalar>
void validate_phase(Scalar beta, const char* name) {
  using std::isfinite;
  // (-pi, pi] with one ulp of slack for values parsed from decimal text.
  const Scalar slack = Scalar(8) * std::numeric_limits<Scalar>::epsilon();
  if (!isfinite(beta) || beta <= -pi_v<Scalar> * (1 + slack) ||
      beta > pi_v<Scalar> * (1 + slack)) {
    throw DomainError(std::string(name) + " must lie in (-pi, pi]");
  }
}

template <typename Scalar>
void validate(const RetardedControlT<Scalar>& c) {
  using std::isfinite;
  if (!isfinite(c.K)) throw DomainError("gain K must be finite");
  validate_phase(c.beta, "beta");
  if (!(c.tau > 0) || !isfinite(c.tau)) throw DomainError("delay tau must be positive");
}

template <typename Scalar>
void validate(const NeutralControlT<Scalar>& n) {
  using std::abs;
  using std::isfinite;
  if (!isfinite(n.K1) || !isfinite(n.K2)) throw DomainError("gains must be finite");
  validate_phase(n.beta1, "beta1");
  validate_phase(n.beta2, "beta2");
  if (!(n.tau > 0) || !isfinite(n.tau)) throw DomainError("delay tau must be positive");
  if (abs(n.leading()) <= std::numeric_limits<Scalar>::epsilon()) {
    throw DenominatorZero("1 + K2 e^{i beta2} vanishes");
  }
}

// ---------------------------------------------------------------------------
// Vector fields

template <typename Scalar>
std::complex<Scalar> uncontrolled_rhs(std::complex<Scalar> z, const ModelParamsT<Scalar>& p) {
  const std::complex<Scalar> linear{p.lambda, Scalar(1)};
  const std::complex<Scalar> cubic{Scalar(1), p.gamma};
  return linear * z + cubic * std::norm(z) * z;
}

template <typename Scalar>
std::complex<Scalar> controlled_rhs(std::complex<Scalar> z_now, std::complex<Scalar> z_delayed,
                                    const ModelParamsT<Scalar>& p,
                                    const RetardedControlT<Scalar>& c) {
  return uncontrolled_rhs(z_now, p) - c.K * unit_phase(c.beta) * (z_now - z_delayed);
}

/// zdot(t) solved from the neutral equation
///   zdot + K2 e^{i b2}[zdot - zdot(t-tau)] = f(z) - K1 e^{i b1}[z - z(t-tau)].
template <typename Scalar>
std::complex<Scalar> neutral_rhs(std::complex<Scalar> z_now, std::complex<Scalar> z_delayed,
                                 std::complex<Scalar> zdot_delayed,
                                 const ModelParamsT<Scalar>& p,
                                 const NeutralControlT<Scalar>& n) {
  const std::complex<Scalar> lead = n.leading();
  if (std::abs(lead) <= std::numeric_limits<Scalar>::epsilon()) throw DenominatorZero("1 + K2 e^{i beta2} vanishes");
  return (uncontrolled_rhs(z_now, p) - n.gain1() * (z_now - z_delayed) +
          n.gain2() * zdot_delayed) /
         lead;
}

/// Linearisation about the rotating wave in co-rotating coordinates
/// w = r + i phi of z = R e^{i omega t}(1 + r + i phi).
template <typename Scalar>
std::complex<Scalar> variational_rhs(std::complex<Scalar> w, std::complex<Scalar> w_delayed,
                                     const ModelParamsT<Scalar>& p,
                                     const RetardedControlT<Scalar>& c) {
  const std::complex<Scalar> radial{-2 * p.lambda, -2 * p.gamma * p.lambda};
  return radial * w.real() - c.K * unit_phase(c.beta) * (w - w_delayed);
}

// ---------------------------------------------------------------------------
// Periodic orbit and parameter curves

template <typename Scalar>
PeriodicOrbitT<Scalar> periodic_orbit(const ModelParamsT<Scalar>& p) {
  using std::sqrt;
  validate(p);
  if (!(p.lambda < 0)) throw DomainError("the rotating wave exists only for lambda < 0");
  const Scalar omega = Scalar(1) - p.gamma * p.lambda;
  if (!(omega > 0)) throw DomainError("orbit frequency 1 - gamma*lambda must be positive");
  return {sqrt(-p.lambda), omega, two_pi_v<Scalar> / omega};
}

/// tau = 2 pi / (1 - gamma theta) on lambda = theta.
template <typename Scalar>
ParameterPointT<Scalar> extended_pyragas_curve_point(Scalar theta, Scalar gamma) {
  const Scalar denom = Scalar(1) - gamma * theta;
  if (denom == Scalar(0)) throw DomainError("theta = 1/gamma is excluded");
  if (gamma > 0 && !(theta < 1 / gamma)) throw DomainError("theta outside (-inf, 1/gamma)");
  if (gamma < 0 && !(theta > 1 / gamma)) throw DomainError("theta outside (1/gamma, inf)");
  return {theta, two_pi_v<Scalar> / denom};
}

template <typename Scalar>
ParameterPointT<Scalar> pyragas_curve_point(Scalar theta, Scalar gamma) {
  if (!(theta < 0)) throw DomainError("the Pyragas curve lives on lambda < 0");
  const Scalar denom = Scalar(1) - gamma * theta;
  if (denom == Scalar(0)) throw DomainError("theta = 1/gamma is excluded");
  return {theta, two_pi_v<Scalar> / denom};
}

/// Points (lambda, tau) where the origin of the controlled system has the
/// characteristic root i*phi/tau.
template <typename Scalar>
ParameterPointT<Scalar> hopf_curve_point(Scalar phi, Scalar K, Scalar beta) {
  using std::cos;
  using std::sin;
  if (phi == Scalar(0)) throw DomainError("phi = 0 is excluded");
  const Scalar denom = Scalar(1) - K * (sin(beta) - sin(beta - phi));
  if (denom == Scalar(0)) throw DomainError("Hopf curve delay denominator vanishes");
  return {K * (cos(beta) - cos(beta - phi)), phi / denom};
}

template <typename Scalar>
ParameterPointT<Scalar> curve_point(CurveKind kind, Scalar theta, const CurveContextT<Scalar>& ctx) {
  switch (kind) {
    case CurveKind::PyragasCurve:
      return pyragas_curve_point(theta, ctx.gamma);
    case CurveKind::ExtendedPyragasCurve:
      return extended_pyragas_curve_point(theta, ctx.gamma);
    case CurveKind::HopfCurve:
      return hopf_curve_point(theta, ctx.K, ctx.beta);
  }
  throw DomainError("unknown curve kind");
}

// ---------------------------------------------------------------------------
// Real form

template <typename Scalar>
Matrix2<Scalar> rotation(Scalar angle) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> r;
  r << cos(angle), -sin(angle), sin(angle), cos(angle);
  return r;
}

template <typename Scalar>
Matrix2<Scalar> nonlinear_coupling(Scalar gamma) {
  Matrix2<Scalar> c;
  c << Scalar(1), -gamma, gamma, Scalar(1);
  return c;
}

template <typename Scalar>
RealFormT<Scalar> real_form(const ModelParamsT<Scalar>& p, const RetardedControlT<Scalar>& c) {
  using std::cos;
  using std::sin;
  RealFormT<Scalar> f;
  const Scalar diag = p.lambda - c.K * cos(c.beta);
  const Scalar off = Scalar(1) - c.K * sin(c.beta);
  f.A << diag, -off, off, diag;
  f.B = c.K * rotation(c.beta);
  f.C = nonlinear_coupling(p.gamma);
  return f;
}

template <typename Scalar>
Vector2<Scalar> real_form_rhs(const Vector2<Scalar>& x, const Vector2<Scalar>& x_delayed,
                              const RealFormT<Scalar>& f) {
  return f.A * x + x.squaredNorm() * (f.C * x) + f.B * x_delayed;
}

}  // namespace pyragas
