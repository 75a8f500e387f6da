#include "pyragas/hopf.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace pyragas {

namespace {

constexpr double kTwoPi = two_pi_v<double>;
const Complex kI{0.0, 1.0};

RetardedControl at_point(const RetardedControl& c, const HopfPoint& point) {
  return {c.K, c.beta, point.tau0};
}

void check_point(const HopfPoint& point) {
  if (!(point.tau0 > 0) || !std::isfinite(point.tau0)) throw DomainError("Hopf delay must be positive");
  if (point.omega0 == 0.0) throw DomainError("Hopf frequency must be nonzero");
}

bool is_pyragas_point(const HopfPoint& point) {
  return std::abs(point.lambda0) <= 1e-12 && std::abs(point.tau0 - kTwoPi) <= 1e-9 &&
         std::abs(point.omega0 - 1.0) <= 1e-9;
}

Complex bilinear_dot(const Vector2c<double>& a, const Vector2c<double>& b) {
  return a(0) * b(0) + a(1) * b(1);
}

Vector2c<double> pick_larger(const Vector2c<double>& a, const Vector2c<double>& b) {
  return a.norm() >= b.norm() ? a : b;
}

}  // namespace

HopfPoint pyragas_hopf_point() { return {0.0, kTwoPi, 1.0, kTwoPi}; }

const char* to_string(Approach a) {
  switch (a) {
    case Approach::PyragasLeft:
      return "pyragas-left";
    case Approach::PyragasRight:
      return "pyragas-right";
    case Approach::LambdaAxis:
      return "lambda-axis";
  }
  return "unknown";
}

const char* to_string(Direction d) {
  return d == Direction::Subcritical ? "subcritical" : "supercritical";
}

const char* to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::Stable:
      return "stable";
    case OrbitVerdict::Unstable:
      return "unstable";
    case OrbitVerdict::Undetermined:
      return "undetermined";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Matrices and rates

ParameterRates parameter_rates(Approach a, double gamma, const HopfPoint& point) {
  switch (a) {
    case Approach::LambdaAxis:
      return {1.0, 0.0};
    case Approach::PyragasLeft:
    case Approach::PyragasRight: {
      const double denom = 1.0 - gamma * point.lambda0;
      if (denom == 0.0) throw DomainError("Pyragas curve undefined at 1 - gamma*lambda = 0");
      const double sign = a == Approach::PyragasLeft ? 1.0 : -1.0;
      return {sign, sign * kTwoPi * gamma / (denom * denom)};
    }
  }
  throw DomainError("unknown approach");
}

Matrix2c<double> characteristic_matrix_dparam(Complex mu, const RetardedControl& c,
                                              const ParameterRates& rates) {
  const Matrix2c<double> b = (c.K * rotation(c.beta)).cast<Complex>();
  return -rates.dlambda * Matrix2c<double>::Identity() +
         (rates.dtau * mu * std::exp(-mu * c.tau)) * b;
}

// ---------------------------------------------------------------------------
// Vectors

HopfVectors hopf_vectors_closed_form(const RetardedControl& c, const HopfPoint& point) {
  check_point(point);
  const Complex factor = simplicity_factor(c.K, c.beta, point.tau0, point.phi);
  if (std::abs(factor) <= 1e-12) {
    throw SimplicityViolation("1 + K tau e^{i(beta - phi)} vanishes");
  }
  HopfVectors v;
  v.alpha = 1.0 / (2.0 * factor);
  v.p << 1.0, -kI;
  v.q << v.alpha, v.alpha * kI;
  return v;
}

HopfVectors hopf_vectors(const ModelParams& p_model, const RetardedControl& c,
                         const HopfPoint& point) {
  check_point(point);
  const RetardedControl cc = at_point(c, point);
  const Complex mu = kI * point.omega0;
  const Matrix2c<double> m = characteristic_matrix(mu, p_model, cc);
  const double size = std::max(1.0, m.norm());
  if (std::abs(m.determinant()) > 1e-10 * size * size) {
    throw DomainError("i*omega0 is not a characteristic root at this point");
  }

  Vector2c<double> kernel_a, kernel_b, left_a, left_b;
  kernel_a << -m(0, 1), m(0, 0);
  kernel_b << m(1, 1), -m(1, 0);
  left_a << -m(1, 0), m(0, 0);
  left_b << m(1, 1), -m(0, 1);
  Vector2c<double> p = pick_larger(kernel_a, kernel_b);
  Vector2c<double> q = pick_larger(left_a, left_b);
  if (p.norm() <= 1e-12 * size || q.norm() <= 1e-12 * size) {
    throw SimplicityViolation("Delta(i omega0) vanishes identically (geometric multiplicity 2)");
  }
  p /= std::abs(p(0)) > 1e-14 * p.norm() ? p(0) : Complex(p.norm());

  const Matrix2c<double> d1 = characteristic_matrix_dmu(mu, cc);
  const Complex s = bilinear_dot(q, d1 * p);
  if (std::abs(s) <= 1e-12 * q.norm() * p.norm() * std::max(1.0, d1.norm())) {
    throw SimplicityViolation("q . D1Delta p vanishes: i*omega0 is not a simple root");
  }
  q /= s;

  HopfVectors v;
  v.p = p;
  v.q = q;
  v.alpha = q(0);
  return v;
}

HopfVectors hopf_vectors(const RetardedControl& c, const HopfPoint& point) {
  return hopf_vectors(ModelParams{point.lambda0, 0.0}, c, point);
}

// ---------------------------------------------------------------------------
// Transversality

double transversality(const RetardedControl& c, const HopfPoint& point, Approach approach,
                      double gamma) {
  check_point(point);
  const Complex factor = simplicity_factor(c.K, c.beta, point.tau0, point.phi);
  if (std::abs(factor) <= 1e-12) {
    throw SimplicityViolation("1 + K tau e^{i(beta - phi)} vanishes");
  }
  const double modulus = std::norm(factor);
  switch (approach) {
    case Approach::LambdaAxis:
      return -(1.0 + c.K * point.tau0 * std::cos(c.beta - point.phi)) / modulus;
    case Approach::PyragasLeft:
    case Approach::PyragasRight: {
      if (!is_pyragas_point(point)) {
        throw DomainError("Pyragas approaches are defined at (lambda, tau) = (0, 2 pi)");
      }
      const double left =
          -(1.0 + kTwoPi * c.K * (std::cos(c.beta) + gamma * std::sin(c.beta))) / modulus;
      return approach == Approach::PyragasLeft ? left : -left;
    }
  }
  throw DomainError("unknown approach");
}

double transversality_from_vectors(const RetardedControl& c, const HopfPoint& point,
                                   Approach approach, double gamma, const HopfVectors& v) {
  check_point(point);
  if (approach != Approach::LambdaAxis && !is_pyragas_point(point)) {
    throw DomainError("Pyragas approaches are defined at (lambda, tau) = (0, 2 pi)");
  }
  const RetardedControl cc = at_point(c, point);
  const Matrix2c<double> d2 = characteristic_matrix_dparam(
      kI * point.omega0, cc, parameter_rates(approach, gamma, point));
  return std::real(bilinear_dot(v.q, d2 * v.p));
}

// ---------------------------------------------------------------------------
// Cubic coefficient

Bilinear zero_bilinear() {
  return [](const Vector2c<double>&, const Vector2c<double>&) {
    return Vector2c<double>::Zero().eval();
  };
}

Vector2c<double> third_derivative(double gamma, const Vector2c<double>& f1,
                                  const Vector2c<double>& f2, const Vector2c<double>& f3) {
  const Matrix2c<double> coupling = nonlinear_coupling(gamma).cast<Complex>();
  const Vector2c<double>* f[3] = {&f1, &f2, &f3};
  static constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  Vector2c<double> sum = Vector2c<double>::Zero();
  for (const auto& s : kPerm) {
    sum += bilinear_dot(*f[s[0]], *f[s[1]]) * (coupling * *f[s[2]]);
  }
  return sum;
}

Complex cubic_c(const ModelParams& p_model, const RetardedControl& c, const HopfPoint& point,
                const HopfVectors& v, const Bilinear& d2g) {
  check_point(point);
  const RetardedControl cc = at_point(c, point);
  const ModelParams at{point.lambda0, p_model.gamma};
  const Vector2c<double> pbar = v.p.conjugate();

  const Complex cubic = 0.5 * bilinear_dot(v.q, third_derivative(p_model.gamma, v.p, v.p, pbar));

  // Quadratic corrections: for an instantaneous nonlinearity the functions
  // e^{0 .} w and e^{2 i omega0 .} w both evaluate to w at theta = 0.
  auto solve = [&](Complex mu, const Vector2c<double>& rhs) -> Vector2c<double> {
    const Eigen::FullPivLU<Matrix2c<double>> lu(characteristic_matrix(mu, at, cc));
    if (!lu.isInvertible() && rhs.norm() > 0) {
      throw SimplicityViolation("Delta is singular at a resonant frequency");
    }
    if (rhs.norm() == 0) return Vector2c<double>::Zero();
    return lu.solve(rhs);
  };
  const Vector2c<double> w0 = solve(Complex(0.0), d2g(v.p, pbar));
  const Vector2c<double> w2 = solve(2.0 * kI * point.omega0, d2g(v.p, v.p));
  const Complex first = bilinear_dot(v.q, d2g(w0, v.p));
  const Complex second = 0.5 * bilinear_dot(v.q, d2g(w2, pbar));
  return cubic + first + second;
}

Complex cubic_c_closed_form(double gamma, const RetardedControl& c, const HopfPoint& point) {
  const Complex factor = simplicity_factor(c.K, c.beta, point.tau0, point.phi);
  if (std::abs(factor) <= 1e-12) {
    throw SimplicityViolation("1 + K tau e^{i(beta - phi)} vanishes");
  }
  return 4.0 * Complex(1.0, gamma) / factor;
}

// ---------------------------------------------------------------------------
// mu2

HopfReport hopf_report(const ModelParams& p_model, const RetardedControl& c,
                       const HopfPoint& point, Approach approach) {
  validate(p_model);
  HopfReport r;
  r.point = point;
  r.approach = approach;
  r.model = p_model;
  r.control = at_point(c, point);
  r.vectors = hopf_vectors(ModelParams{point.lambda0, p_model.gamma}, c, point);
  r.transversality = transversality_from_vectors(c, point, approach, p_model.gamma, r.vectors);
  if (std::abs(r.transversality) <= 1e-12) {
    throw DegenerateTransversality("Re(q . D2Delta p) vanishes");
  }
  r.c = cubic_c(p_model, c, point, r.vectors);
  r.mu2 = std::real(r.c) / r.transversality;
  r.direction = r.mu2 < 0 ? Direction::Subcritical : Direction::Supercritical;
  return r;
}

Mu2Result mu2(const ModelParams& p_model, const RetardedControl& c, const HopfPoint& point,
              Approach approach) {
  const HopfReport r = hopf_report(p_model, c, point, approach);
  return {r.mu2, r.direction};
}

// ---------------------------------------------------------------------------
// Hopf curve

HopfCurveResult hopf_curve_conditions(const RetardedControl& c, double phi) {
  if (phi == 0.0 || !std::isfinite(phi)) throw DomainError("phi must be finite and nonzero");
  const ParameterPoint pp = hopf_curve_point(phi, c.K, c.beta);
  if (!(pp.tau > 0) || !std::isfinite(pp.tau)) {
    throw DomainError("the Hopf curve delay is not positive at this phi");
  }
  HopfCurveResult r;
  r.point = {pp.lambda, pp.tau, phi / pp.tau, phi};

  const RetardedControl cc{c.K, c.beta, pp.tau};
  validate(cc);
  const Complex factor = simplicity_factor(c.K, c.beta, pp.tau, phi);
  r.simple_factor_nonzero = std::abs(factor) > 1e-12;
  r.derivative_positive = 1.0 + c.K * pp.tau * std::cos(c.beta - phi) > 0;

  const CharFunction f = CharFunction::controlled(ModelParams{pp.lambda, 0.0}, cc);
  const double w = r.point.omega0;
  r.multiplicity = count_in_circle(f, kI * w, 1e-4);

  r.non_resonant = true;
  const int kmax = static_cast<int>(std::floor(20.0 / std::abs(w)));
  for (int k = -kmax; k <= kmax && r.non_resonant; ++k) {
    if (k == 1) continue;
    if (count_in_circle(f, kI * (k * w), 1e-4) != 0) r.non_resonant = false;
  }
  r.occurs = r.simple_factor_nonzero && r.derivative_positive && r.multiplicity == 1 &&
             r.non_resonant;
  return r;
}

// ---------------------------------------------------------------------------
// Root tendencies

double root_tendency(const RetardedControl& c, double gamma) {
  const Complex factor = simplicity_factor(c.K, c.beta, kTwoPi, 0.0);
  if (std::abs(factor) <= 1e-12) throw SimplicityViolation("1 + 2 pi K e^{i beta} vanishes");
  return root_tendency_value(c.K, c.beta, gamma);
}

double root_tendency_neutral(const NeutralControl& n, double gamma) {
  const Complex a = 1.0 + kTwoPi * n.gain1() + kTwoPi * kI * n.gain2();
  if (std::abs(a) <= 1e-12) {
    throw SimplicityViolation("1 + 2 pi K1 e^{i beta1} + 2 pi i K2 e^{i beta2} vanishes");
  }
  return sign_expression(n, gamma) / std::norm(a);
}

CharFamily extended_pyragas_family(double gamma, const RetardedControl& c) {
  return [gamma, c](double theta) {
    const ParameterPoint pp = extended_pyragas_curve_point(theta, gamma);
    return CharFunction::controlled(ModelParams{pp.lambda, gamma}, {c.K, c.beta, pp.tau});
  };
}

CharFamily extended_pyragas_family(double gamma, const NeutralControl& n) {
  return [gamma, n](double theta) {
    const ParameterPoint pp = extended_pyragas_curve_point(theta, gamma);
    NeutralControl m = n;
    m.tau = pp.tau;
    return CharFunction::neutral(ModelParams{pp.lambda, gamma}, m);
  };
}

double tracked_tendency(const CharFamily& family, double step) {
  if (!(step > 0)) throw DomainError("step must be positive");
  auto central = [&](double h) {
    const auto up = track_root(family, kI, {0.0, h});
    const auto down = track_root(family, kI, {0.0, -h});
    return (up.back().real() - down.back().real()) / (2.0 * h);
  };
  // Richardson table over halving steps until the diagonal settles.
  constexpr int kLevels = 10;
  std::vector<std::vector<double>> table;
  double h = step;
  double best = 0.0;
  for (int i = 0; i < kLevels; ++i, h *= 0.5) {
    std::vector<double> row{central(h)};
    for (int j = 1; j <= i; ++j) {
      const double f = std::pow(4.0, j);
      row.push_back(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (f - 1.0));
    }
    if (i > 0 && std::abs(row.back() - best) <= 1e-10 * std::max(1.0, std::abs(best))) {
      return row.back();
    }
    best = row.back();
    table.push_back(std::move(row));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Verdicts

double sign_expression(const RetardedControl& c, double gamma) {
  return 1.0 + kTwoPi * c.K * (std::cos(c.beta) + gamma * std::sin(c.beta));
}

double sign_expression(const NeutralControl& n, double gamma) {
  return 1.0 + kTwoPi * n.K1 * (std::cos(n.beta1) + gamma * std::sin(n.beta1)) -
         kTwoPi * n.K2 * (std::sin(n.beta2) - gamma * std::cos(n.beta2));
}

namespace {

OrbitVerdictReport finish_verdict(const CharFunction& f, double sign, const ModelParams& p,
                                  const VerdictOptions& opts) {
  if (!(p.lambda < 0)) throw DomainError("orbit verdicts need lambda < 0");
  OrbitVerdictReport out;
  OrbitCertificate& cert = out.certificate;
  cert.sign_value = sign;
  cert.large_lambda_warning = std::abs(p.lambda) > opts.small_lambda;
  if (std::abs(sign) <= opts.boundary_tolerance) {
    throw BoundaryCase("sign expression " + std::to_string(sign) + " is at the boundary");
  }
  cert.sign_negative = sign < 0;
  if (!cert.sign_negative) {
    out.verdict = OrbitVerdict::Unstable;
    cert.note = "sign expression positive: subcritical crossing, orbit unstable";
    return out;
  }
  const CensusBox cb = census_box(f, opts.gap);
  cert.census_checked = true;
  cert.census_complete = cb.complete;
  const SpectralGapReport gap = spectral_gap_report(f, cb.box, {kI, -kI}, opts.gap, opts.find);
  cert.box = gap.box;
  cert.roots = gap.roots;
  cert.essential = gap.essential;
  cert.spectral_gap = gap.holds;
  if (gap.holds && cb.complete) {
    out.verdict = OrbitVerdict::Stable;
    cert.note = "sign expression negative and spectral gap certified";
  } else if (!gap.holds) {
    out.verdict = OrbitVerdict::Undetermined;
    cert.note = "sign expression negative but the spectral gap fails";
  } else {
    out.verdict = OrbitVerdict::Undetermined;
    cert.note = "sign expression negative; census box is not a complete bound";
  }
  return out;
}

}  // namespace

OrbitVerdictReport orbit_verdict(const ModelParams& p_model, const RetardedControl& c,
                                 const VerdictOptions& opts) {
  validate(p_model);
  validate(c);
  const CharFunction f =
      CharFunction::controlled(ModelParams{0.0, p_model.gamma}, {c.K, c.beta, kTwoPi});
  return finish_verdict(f, sign_expression(c, p_model.gamma), p_model, opts);
}

OrbitVerdictReport orbit_verdict(const ModelParams& p_model, const NeutralControl& n,
                                 const VerdictOptions& opts) {
  validate(p_model);
  validate(n);
  NeutralControl at = n;
  at.tau = kTwoPi;
  const CharFunction f = CharFunction::neutral(ModelParams{0.0, p_model.gamma}, at);
  return finish_verdict(f, sign_expression(n, p_model.gamma), p_model, opts);
}

}  // namespace pyragas
