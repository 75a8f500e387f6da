#include "pyragas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pyragas/charts.hpp"
#include "pyragas/hopf.hpp"
#include "pyragas/integrator.hpp"
#include "pyragas/model.hpp"
#include "pyragas/spectrum.hpp"

namespace pyragas::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine); }
  // Phases are drawn from (-pi, pi].
  double phase() { return -uniform(-kPi, kPi); }
  Complex complex(double r) { return {uniform(-r, r), uniform(-r, r)}; }
  std::mt19937_64 engine;
};

// Largest error seen against a tolerance, with the first failing case kept.
class Tally {
 public:
  Tally(std::string name, double tolerance) : name_(std::move(name)), tol_(tolerance) {}

  void record(double err, const std::string& where = "") {
    ++cases_;
    if (std::isnan(err)) err = INFINITY;
    worst_ = std::max(worst_, err);
    if (!(err <= tol_) && first_bad_.empty()) first_bad_ = where.empty() ? "case " + std::to_string(cases_) : where;
  }
  void require(bool ok, const std::string& where) { record(ok ? 0.0 : INFINITY, where); }

  PropertyResult result() const {
    std::ostringstream os;
    os << cases_ << " cases, max error " << worst_ << " (tol " << tol_ << ")";
    if (!first_bad_.empty()) os << ", first failure: " << first_bad_;
    return {name_, first_bad_.empty() && cases_ > 0, os.str()};
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  int cases_ = 0;
  std::string first_bad_;
};

std::string describe(const RetardedControl& c, double gamma) {
  std::ostringstream os;
  os << "K=" << c.K << " beta=" << c.beta << " tau=" << c.tau << " gamma=" << gamma;
  return os.str();
}

Vector2<double> to_real(Complex z) { return {z.real(), z.imag()}; }

// --------------------------------------------------------------------------
// Model

PropertyResult non_invasive(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("model.non_invasive", 1e-12);
  for (int k = 0; k < 1000; ++k) {
    ModelParams p{rng.uniform(-1.0, -1e-3), rng.uniform(-10, 10)};
    if (1 - p.gamma * p.lambda <= 0.05) continue;
    const PeriodicOrbit orbit = periodic_orbit(p);
    RetardedControl c{rng.uniform(-2, 2), rng.phase(), orbit.period};
    NeutralControl n{rng.uniform(-2, 2), rng.phase(), rng.uniform(-0.5, 0.5), rng.phase(), orbit.period};
    const double s = rng.uniform(0, 20);
    const Complex z = orbit.at(s);
    const Complex zd = orbit.at(s - orbit.period);
    const Complex dd = orbit.derivative_at(s - orbit.period);
    const Complex target = orbit.derivative_at(s);
    const double scale = std::max(1.0, std::abs(target));
    t.record(std::abs(controlled_rhs(z, zd, p, c) - target) / scale, describe(c, p.gamma));
    t.record(std::abs(neutral_rhs(z, zd, dd, p, n) - target) / scale, describe(c, p.gamma));
  }
  return t.result();
}

PropertyResult equivariance(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("model.rotational_equivariance", 1e-12);
  for (int k = 0; k < 1000; ++k) {
    ModelParams p{rng.uniform(-1, 1), rng.uniform(-10, 10)};
    RetardedControl c{rng.uniform(-2, 2), rng.phase(), rng.uniform(0.1, 10)};
    NeutralControl n{rng.uniform(-2, 2), rng.phase(), rng.uniform(-0.5, 0.5), rng.phase(), c.tau};
    const Complex rot = unit_phase(rng.uniform(0, kTwoPi));
    const Complex z = rng.complex(1.5), zd = rng.complex(1.5), dd = rng.complex(1.5);
    const Complex a = controlled_rhs(rot * z, rot * zd, p, c);
    const Complex b = rot * controlled_rhs(z, zd, p, c);
    t.record(std::abs(a - b) / std::max(1.0, std::abs(b)));
    const Complex an = neutral_rhs(rot * z, rot * zd, rot * dd, p, n);
    const Complex bn = rot * neutral_rhs(z, zd, dd, p, n);
    t.record(std::abs(an - bn) / std::max(1.0, std::abs(bn)));
  }
  return t.result();
}

PropertyResult real_form_consistency(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("model.real_form", 1e-12);
  for (int k = 0; k < 1000; ++k) {
    ModelParams p{rng.uniform(-1, 1), rng.uniform(-10, 10)};
    RetardedControl c{rng.uniform(-2, 2), rng.phase(), rng.uniform(0.1, 10)};
    const RealForm f = real_form(p, c);
    const Complex z = rng.complex(1.5), zd = rng.complex(1.5);
    const Vector2<double> a = real_form_rhs(to_real(z), to_real(zd), f);
    const Complex b = controlled_rhs(z, zd, p, c);
    t.record((a - to_real(b)).norm() / std::max(1.0, std::abs(b)));
    const Matrix2<double> sym = f.C + f.C.transpose();
    t.record((sym - 2 * Matrix2<double>::Identity()).norm());
    t.record(std::abs(f.C.determinant() - (1 + p.gamma * p.gamma)) / (1 + p.gamma * p.gamma));
  }
  return t.result();
}

PropertyResult hopf_curve_endpoint(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("model.hopf_curve_at_2pi", 1e-14);
  for (int k = 0; k < 1000; ++k) {
    const double K = rng.uniform(-2, 2);
    const double beta = rng.phase();
    const ParameterPoint pp = hopf_curve_point(kTwoPi, K, beta);
    t.record(std::max(std::abs(pp.lambda), std::abs(pp.tau - kTwoPi) / kTwoPi));
  }
  return t.result();
}

PropertyResult curves_meet(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("model.extended_curve_through_hopf_point", 0.0);
  for (int k = 0; k < 100; ++k) {
    const double gamma = rng.uniform(-10, 10);
    const ParameterPoint pp = extended_pyragas_curve_point(0.0, gamma);
    t.record(std::max(std::abs(pp.lambda), std::abs(pp.tau - kTwoPi)));
  }
  return t.result();
}

// --------------------------------------------------------------------------
// Integrator

PropertyResult rk4_order(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("integrator.fourth_order", 0.0);
  for (int k = 0; k < 5; ++k) {
    ModelParams p{rng.uniform(-1.0, -0.2), rng.uniform(-3, 3)};
    const Complex z0 = 0.3 * unit_phase(rng.uniform(0, kTwoPi));
    const double T = 2.0;
    auto end = [&](double h) { return integrate_ode(p, z0, T, h).segments().back().z1; };
    const Complex ref = end(1.0 / 320);
    const double e1 = std::abs(end(1.0 / 20) - ref);
    const double e2 = std::abs(end(1.0 / 40) - ref);
    const double ratio = e1 / e2;
    // Halving h must cut the error by at least 12 (fourth order gives 16).
    t.require(ratio >= 12.0 || e1 < 1e-13, "ratio " + std::to_string(ratio));
  }
  return t.result();
}

PropertyResult method_of_steps(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("integrator.method_of_steps", 1e-10);
  for (int k = 0; k < 5; ++k) {
    ModelParams p{rng.uniform(-0.5, -0.01), rng.uniform(-3, 3)};
    RetardedControl c{rng.uniform(-0.5, 0.5), rng.phase(), rng.uniform(1, 7)};
    const double h = c.tau / 100;
    const HistoryFunction hist = constant_history(0.5 * unit_phase(rng.uniform(0, kTwoPi)));
    const Trajectory whole = integrate_dde(p, c, hist, 3 * c.tau, h);
    Trajectory part = integrate_dde(p, c, hist, c.tau, h);
    extend_dde(part, p, c, 2 * c.tau);
    extend_dde(part, p, c, 3 * c.tau);
    t.require(part.size() == whole.size(), "segment count");
    for (std::size_t i = 0; i < std::min(part.size(), whole.size()); ++i) {
      t.record(std::abs(part.segments()[i].z1 - whole.segments()[i].z1));
    }
  }
  return t.result();
}

PropertyResult simulated_non_invasive(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("integrator.orbit_preserved", 1e-6);
  for (int k = 0; k < 6; ++k) {
    ModelParams p{rng.uniform(-0.05, -0.005), rng.uniform(-10, 10)};
    const PeriodicOrbit orbit = periodic_orbit(p);
    RetardedControl c{rng.uniform(-0.3, 0.3), rng.phase(), orbit.period};
    NeutralControl n{rng.uniform(-0.3, 0.3), rng.phase(), rng.uniform(-0.2, 0.2), rng.phase(), orbit.period};
    const double h = orbit.period / kDefaultStepsPerDelay;
    const Trajectory a = integrate_dde(p, c, orbit_history(orbit), 5 * orbit.period, h);
    const Trajectory b = integrate_ndde(p, n, orbit_history(orbit), 5 * orbit.period, h);
    for (const Trajectory* tr : {&a, &b}) {
      for (const Trajectory::Segment& s : tr->segments()) {
        t.record(std::abs(std::abs(s.z1) - orbit.radius), describe(c, p.gamma));
      }
    }
  }
  return t.result();
}

PropertyResult variational_linearity(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("integrator.variational_linearity", 1e-10);
  for (int k = 0; k < 5; ++k) {
    ModelParams p{rng.uniform(-0.5, -0.01), rng.uniform(-5, 5)};
    RetardedControl c{rng.uniform(-0.5, 0.5), rng.phase(), rng.uniform(1, 7)};
    const Complex u = rng.complex(1.0), v = rng.complex(1.0);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const double h = c.tau / 50;
    const double T = 3 * c.tau;
    const Trajectory tu = integrate_variational(p, c, constant_history(u), T, h);
    const Trajectory tv = integrate_variational(p, c, constant_history(v), T, h);
    const Trajectory tw = integrate_variational(p, c, constant_history(a * u + b * v), T, h);
    for (std::size_t i = 0; i < tw.size(); ++i) {
      const Complex expect = a * tu.segments()[i].z1 + b * tv.segments()[i].z1;
      t.record(std::abs(tw.segments()[i].z1 - expect) / std::max(1.0, std::abs(expect)));
    }
  }
  return t.result();
}

PropertyResult neutral_reduces_to_retarded(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("integrator.neutral_K2_zero", 1e-10);
  for (int k = 0; k < 4; ++k) {
    ModelParams p{rng.uniform(-0.1, -0.01), rng.uniform(-5, 5)};
    const PeriodicOrbit orbit = periodic_orbit(p);
    NeutralControl n{rng.uniform(-0.5, 0.5), rng.phase(), 0.0, rng.phase(), orbit.period};
    const HistoryFunction hist = perturbed_orbit_history(orbit, 0.1, 0.05);
    const double h = orbit.period / 200;
    const Trajectory a = integrate_ndde(p, n, hist, 10 * orbit.period, h);
    const Trajectory b = integrate_dde(p, n.retarded_part(), hist, 10 * orbit.period, h);
    for (std::size_t i = 0; i < a.size(); ++i) {
      t.record(std::abs(a.segments()[i].z1 - b.segments()[i].z1));
    }
  }
  return t.result();
}

// --------------------------------------------------------------------------
// Spectrum

PropertyResult trivial_floquet_root(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.trivial_root", 1e-12);
  for (int k = 0; k < 10000; ++k) {
    ModelParams p{rng.uniform(-1, 1), rng.uniform(-10, 10)};
    RetardedControl c{rng.uniform(-2, 2), rng.phase(), rng.uniform(0.1, 10)};
    t.record(std::abs(char_variational(Complex{}, p, c)), describe(c, p.gamma));
  }
  return t.result();
}

PropertyResult conjugate_symmetry(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.conjugate_symmetry", 1e-8);
  for (int k = 0; k < 3; ++k) {
    ModelParams p{rng.uniform(-0.3, -0.02), rng.uniform(-3, 3)};
    RetardedControl c{rng.uniform(-0.4, 0.4), rng.phase(), kTwoPi};
    const CharFunction f = CharFunction::variational(p, c);
    for (int s = 0; s < 20; ++s) {
      const Complex mu = rng.complex(3.0);
      t.record(std::abs(f(std::conj(mu)) - std::conj(f(mu))) / f.scale(mu));
    }
    const auto roots = find_roots(f, SearchBox{-1.0, 1.0, -6.0, 6.0});
    for (const Root& r : roots) {
      double best = INFINITY;
      for (const Root& s : roots) best = std::min(best, std::abs(s.mu - std::conj(r.mu)));
      t.record(best, describe(c, p.gamma));
    }
  }
  return t.result();
}

PropertyResult count_matches_roots(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.count_matches_refined_roots", 0.0);
  for (int k = 0; k < 6; ++k) {
    ModelParams p{rng.uniform(-0.3, 0.3), rng.uniform(-5, 5)};
    RetardedControl c{rng.uniform(-0.5, 0.5), rng.phase(), rng.uniform(2, 8)};
    NeutralControl n{c.K, c.beta, rng.uniform(-0.3, 0.3), rng.phase(), c.tau};
    const SearchBox box{-1.5, 1.0, -8.0, 8.0};
    for (const CharFunction& f : {CharFunction::controlled(p, c), CharFunction::neutral(p, n)}) {
      try {
        const auto roots = find_roots(f, box);
        int total = 0;
        for (const Root& r : roots) total += r.multiplicity;
        const int count = count_roots(f, box);
        t.require(total == count, describe(c, p.gamma));
      } catch (const BoundaryRoot&) {
        // A root on the contour even after perturbation; skip the draw.
      }
    }
  }
  return t.result();
}

PropertyResult reduction_chain(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.reduction_chain", 1e-12);
  for (int k = 0; k < 200; ++k) {
    ModelParams p{rng.uniform(-1, 1), rng.uniform(-10, 10)};
    RetardedControl c{rng.uniform(-2, 2), rng.phase(), rng.uniform(0.1, 10)};
    NeutralControl n{c.K, c.beta, 0.0, rng.phase(), c.tau};
    const Complex mu = rng.complex(3.0);
    const CharFunction ctrl = CharFunction::controlled(p, c);
    t.record(std::abs(CharFunction::neutral(p, n)(mu) - ctrl(mu)) / ctrl.scale(mu));
    const RetardedControl off{0.0, c.beta, c.tau};
    t.record(std::abs(char_controlled(mu, p, off) - char_uncontrolled(mu, p)) /
             std::max(1.0, std::abs(mu) + 2));
  }
  // With K = 0 the only root is lambda + i.
  for (int k = 0; k < 5; ++k) {
    ModelParams p{rng.uniform(-0.5, 0.5), rng.uniform(-5, 5)};
    const auto roots = find_roots(CharFunction::controlled(p, {0.0, 0.0, kTwoPi}), SearchBox{-2, 2, -5, 5});
    t.require(roots.size() == 1, "K=0 root count");
    if (roots.size() == 1) t.require(std::abs(roots[0].mu - Complex(p.lambda, 1.0)) < 1e-10, "K=0 root");
  }
  return t.result();
}

PropertyResult derivatives_match(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.derivative_vs_difference", 1e-6);
  for (int k = 0; k < 100; ++k) {
    ModelParams p{rng.uniform(-1, 1), rng.uniform(-5, 5)};
    RetardedControl c{rng.uniform(-1, 1), rng.phase(), rng.uniform(0.5, 8)};
    NeutralControl n{c.K, c.beta, rng.uniform(-0.5, 0.5), rng.phase(), c.tau};
    const Complex mu{rng.uniform(-1, 1), rng.uniform(-5, 5)};
    const double h = 1e-6;
    for (const CharFunction& f :
         {CharFunction::uncontrolled(p), CharFunction::controlled(p, c),
          CharFunction::variational(p, c), CharFunction::neutral(p, n)}) {
      const Complex fd = (f(mu + h) - f(mu - h)) / (2 * h);
      const Complex d = f.derivative(mu);
      t.record(std::abs(fd - d) / std::max(1.0, std::abs(d)), f.name());
    }
  }
  return t.result();
}

PropertyResult floquet_formula(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("spectrum.floquet_vs_monodromy", 1e-6);
  for (int k = 0; k < 10; ++k) {
    ModelParams p{rng.uniform(-1, -0.05), rng.uniform(-3, 3)};
    if (1 - p.gamma * p.lambda <= 0.2) continue;
    const FloquetReport rep = floquet_uncontrolled(p);
    const RetardedControl off{0.0, 0.0, rep.period};
    const double h = rep.period / 2000;
    Matrix2<double> m;
    const Complex e1 = integrate_variational(p, off, constant_history(1.0), rep.period, h).segments().back().z1;
    const Complex e2 = integrate_variational(p, off, constant_history(kI), rep.period, h).segments().back().z1;
    m << e1.real(), e2.real(), e1.imag(), e2.imag();
    Eigen::EigenSolver<Matrix2<double>> es(m);
    std::vector<double> numeric{std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1))};
    std::vector<double> closed{std::abs(rep.multipliers[0]), std::abs(rep.multipliers[1])};
    std::sort(numeric.begin(), numeric.end());
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < 2; ++i) t.record(std::abs(numeric[i] - closed[i]) / closed[i]);
    t.require(rep.stable == (p.gamma * p.lambda > 1), "stability flag");
  }
  return t.result();
}

// --------------------------------------------------------------------------
// Hopf

RetardedControl draw_admissible(Rng& rng, double& gamma) {
  for (;;) {
    gamma = rng.uniform(-10, 10);
    RetardedControl c{rng.uniform(-1, 1), rng.phase(), kTwoPi};
    if (std::abs(simplicity_factor(c.K, c.beta, kTwoPi, kTwoPi)) > 0.05) return c;
  }
}

PropertyResult pyragas_mu2(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.mu2_pyragas", 1e-10);
  for (int k = 0; k < 200; ++k) {
    double gamma = 0;
    const RetardedControl c = draw_admissible(rng, gamma);
    const ModelParams p{0.0, gamma};
    const HopfPoint pt = pyragas_hopf_point();
    t.record(std::abs(mu2(p, c, pt, Approach::PyragasLeft).mu2 + 4) / 4, describe(c, gamma));
    t.record(std::abs(mu2(p, c, pt, Approach::PyragasRight).mu2 - 4) / 4, describe(c, gamma));
  }
  return t.result();
}

PropertyResult lambda_axis_mu2(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.mu2_lambda_axis", 1e-10);
  int done = 0;
  while (done < 200) {
    const double gamma = rng.uniform(-10, 10);
    const double K = rng.uniform(-1, 1), beta = rng.phase(), phi = rng.uniform(0.2, 4 * kPi);
    ParameterPoint pp{};
    try {
      pp = hopf_curve_point(phi, K, beta);
    } catch (const DomainError&) {
      continue;
    }
    if (!(pp.tau > 0.1) || pp.tau > 50) continue;
    const double deriv = 1 + K * pp.tau * std::cos(beta - phi);
    if (deriv < 0.05 || std::abs(simplicity_factor(K, beta, pp.tau, phi)) < 0.05) continue;
    const RetardedControl c{K, beta, pp.tau};
    const HopfPoint pt{pp.lambda, pp.tau, phi / pp.tau, phi};
    const double expect = mu2_lambda_axis_closed_form(K, beta, gamma, pp.tau, phi);
    const double got = mu2({pp.lambda, gamma}, c, pt, Approach::LambdaAxis).mu2;
    t.record(std::abs(got - expect) / std::max(1.0, std::abs(expect)), describe(c, gamma));
    ++done;
  }
  return t.result();
}

PropertyResult direction_dichotomy(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.direction_sign", 0.0);
  int done = 0;
  while (done < 200) {
    const double gamma = rng.uniform(-10, 10);
    const double K = rng.uniform(-1, 1), beta = rng.phase(), phi = rng.uniform(0.2, 4 * kPi);
    ParameterPoint pp{};
    try {
      pp = hopf_curve_point(phi, K, beta);
    } catch (const DomainError&) {
      continue;
    }
    if (!(pp.tau > 0.1) || pp.tau > 50) continue;
    if (1 + K * pp.tau * std::cos(beta - phi) < 0.05) continue;
    const double x = 1 + K * pp.tau * (std::cos(beta - phi) + gamma * std::sin(beta - phi));
    if (std::abs(x) < 1e-6) continue;
    const RetardedControl c{K, beta, pp.tau};
    const HopfPoint pt{pp.lambda, pp.tau, phi / pp.tau, phi};
    const Mu2Result r = mu2({pp.lambda, gamma}, c, pt, Approach::LambdaAxis);
    t.require((r.direction == Direction::Subcritical) == (x > 0), describe(c, gamma));
    ++done;
  }
  return t.result();
}

PropertyResult transversality_antisymmetry(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.transversality_antisymmetry", 1e-12);
  for (int k = 0; k < 200; ++k) {
    double gamma = 0;
    const RetardedControl c = draw_admissible(rng, gamma);
    const HopfPoint pt = pyragas_hopf_point();
    const double left = transversality(c, pt, Approach::PyragasLeft, gamma);
    const double right = transversality(c, pt, Approach::PyragasRight, gamma);
    t.record(std::abs(left + right) / std::max(1.0, std::abs(left)));
    const HopfVectors v = hopf_vectors({0.0, gamma}, c, pt);
    const double l2 = transversality_from_vectors(c, pt, Approach::PyragasLeft, gamma, v);
    t.record(std::abs(l2 - left) / std::max(1.0, std::abs(left)), describe(c, gamma));
  }
  return t.result();
}

PropertyResult vectors_and_c(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.generic_vs_closed_form", 1e-10);
  for (int k = 0; k < 200; ++k) {
    double gamma = 0;
    const RetardedControl c = draw_admissible(rng, gamma);
    const ModelParams p{0.0, gamma};
    const HopfPoint pt = pyragas_hopf_point();
    const HopfVectors v = hopf_vectors(p, c, pt);
    const HopfVectors w = hopf_vectors_closed_form(c, pt);
    const Complex mu = kI * pt.omega0;
    const Matrix2c<double> delta = characteristic_matrix(mu, p, c);
    t.record((delta * v.p).norm());
    t.record((v.q.transpose() * delta).norm());
    const Complex normal = v.q.transpose() * characteristic_matrix_dmu(mu, c) * v.p;
    t.record(std::abs(normal - 1.0));
    t.record((v.p - w.p).norm() + (v.q - w.q).norm());
    const Complex cg = cubic_c(p, c, pt, v);
    const Complex cc = cubic_c_closed_form(gamma, c, pt);
    t.record(std::abs(cg - cc) / std::max(1.0, std::abs(cc)), describe(c, gamma));
  }
  return t.result();
}

PropertyResult tendencies_track(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.tendency_vs_tracking", 1e-6);
  int done = 0;
  while (done < 20) {
    const double gamma = rng.uniform(-10, 10);
    const RetardedControl c{rng.uniform(-0.5, 0.5), rng.phase(), kTwoPi};
    NeutralControl n{c.K, c.beta, rng.uniform(-0.3, 0.3), rng.phase(), kTwoPi};
    if (std::abs(simplicity_factor(c.K, c.beta, kTwoPi, 0.0)) < 0.1) continue;
    try {
      const double a = root_tendency(c, gamma);
      const double b = tracked_tendency(extended_pyragas_family(gamma, c));
      t.record(std::abs(a - b) / std::max(1.0, std::abs(a)), describe(c, gamma));
      const double an = root_tendency_neutral(n, gamma);
      const double bn = tracked_tendency(extended_pyragas_family(gamma, n));
      t.record(std::abs(an - bn) / std::max(1.0, std::abs(an)), describe(c, gamma));
      n.K2 = 0;
      t.record(std::abs(root_tendency_neutral(n, gamma) - a) / std::max(1.0, std::abs(a)));
    } catch (const DenominatorZero&) {
      continue;
    }
    ++done;
  }
  return t.result();
}

PropertyResult hopf_curve_roots(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("hopf.curve_residual", 1e-10);
  int done = 0;
  while (done < 100) {
    const double gamma = rng.uniform(-10, 10);
    const double K = rng.uniform(-1, 1), beta = rng.phase(), phi = rng.uniform(0.2, 4 * kPi);
    ParameterPoint pp{};
    try {
      pp = hopf_curve_point(phi, K, beta);
    } catch (const DomainError&) {
      continue;
    }
    if (!(pp.tau > 0.1) || pp.tau > 50) continue;
    const RetardedControl c{K, beta, pp.tau};
    const CharFunction f = CharFunction::controlled({pp.lambda, gamma}, c);
    const Complex mu = kI * (phi / pp.tau);
    t.record(std::abs(f(mu)) / f.scale(mu), describe(c, gamma));
    ++done;
  }
  return t.result();
}

// --------------------------------------------------------------------------
// Charts

PropertyResult boundary_on_axis(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("charts.boundary_residual", 1e-8);
  const auto omegas = default_omegas(99);
  for (int k = 0; k < 4; ++k) {
    const double beta1 = rng.phase();
    double beta2 = k % 2 == 0 ? beta1 : rng.phase();
    if (std::abs(std::cos(beta1 - beta2)) < 0.1) beta2 = beta1;
    const double gamma = rng.uniform(-10, 10);
    for (const BoundarySample& s : ndde_boundary(beta1, beta2, omegas)) {
      const NeutralControl n{s.K1, beta1, s.K2, beta2, kTwoPi};
      const CharFunction f = CharFunction::neutral({0.0, gamma}, n);
      const Complex mu = kI * s.omega;
      t.record(std::abs(f(mu)) / f.scale(mu), "omega=" + std::to_string(s.omega));
    }
  }
  return t.result();
}

PropertyResult charts_monotone(std::uint64_t) {
  Tally t("charts.flag_consistency", 0.0);
  const GridSpec g{-0.3, 0.8, -0.8, 0.45, 30, 30};
  ChartOptions opts;
  opts.jobs = 1;
  const Chart ch = neutral_chart(-10.0, kPi / 4, kPi / 4, g, opts);
  for (const RegionCell& c : ch.cells) {
    const bool all = c.inside_boundary && c.stable_d && c.sign_condition && c.spectral_gap;
    t.require((c.verdict == CellVerdict::Stable) == all, "cell flags");
    t.require(!c.spectral_gap || (c.inside_boundary && c.stable_d), "gap without inside");
    t.require(c.sign_condition == (c.sign_value < 0), "sign flag");
  }
  t.require(ch.stable_count() > 0, "empty stable region");
  return t.result();
}

PropertyResult chart_reduction(std::uint64_t) {
  Tally t("charts.K2_zero_row_matches_retarded", 0.0);
  const double gamma = -10.0, beta = kPi / 4;
  ChartOptions opts;
  opts.mode = InsideMode::Census;
  opts.jobs = 1;
  const int n = 21;
  const Chart neutral = neutral_chart(gamma, beta, beta, GridSpec{-0.3, 0.8, -0.1, 0.1, n, 1}, opts);
  const Chart retarded = retarded_chart(gamma, beta, GridSpec{-0.02, -0.005, -0.3, 0.8, 1, n}, opts);
  for (int i = 0; i < n; ++i) {
    const RegionCell& a = neutral.at(i, 0);
    const RegionCell& b = retarded.at(0, i);
    t.require(a.sign_condition == b.sign_condition, "sign at K=" + std::to_string(a.x));
    t.require(a.spectral_gap == b.spectral_gap, "gap at K=" + std::to_string(a.x));
    t.require(a.verdict == b.verdict, "verdict at K=" + std::to_string(a.x));
  }
  return t.result();
}

PropertyResult verdict_reduction(std::uint64_t seed) {
  Rng rng(seed);
  Tally t("charts.neutral_verdict_K2_zero", 0.0);
  for (int k = 0; k < 5; ++k) {
    const double gamma = rng.uniform(-10, 10);
    const RetardedControl c{rng.uniform(-0.4, 0.6), rng.phase(), kTwoPi};
    const NeutralControl n{c.K, c.beta, 0.0, rng.phase(), kTwoPi};
    const ModelParams p{-0.005, gamma};
    try {
      const auto a = orbit_verdict(p, c);
      const auto b = orbit_verdict(p, n);
      t.require(a.verdict == b.verdict, describe(c, gamma));
      t.record(std::abs(a.certificate.sign_value - b.certificate.sign_value) * 1e12);
    } catch (const BoundaryCase&) {
    }
  }
  return t.result();
}

PropertyResult simulation_agrees(std::uint64_t) {
  Tally t("charts.simulation_agreement", 0.0);
  ChartOptions opts;
  opts.jobs = 1;
  const Chart ch = neutral_chart(-10.0, kPi / 4, kPi / 4, GridSpec{-0.3, 0.8, -0.8, 0.45, 40, 40}, opts);
  CrossValidateOptions cv;
  cv.jobs = 1;
  const CrossValidateReport r = cross_validate(ch, cv);
  std::ostringstream os;
  os << r.agreed << "/" << r.compared << " agree";
  t.require(r.compared > 0 && r.agreement() >= 0.9, os.str());
  PropertyResult out = t.result();
  out.detail = os.str() + ", " + std::to_string(r.inconclusive) + " inconclusive; " + out.detail;
  return out;
}

}  // namespace

const std::vector<Property>& properties() {
  static const std::vector<Property> all{
      {"model.non_invasive", non_invasive},
      {"model.rotational_equivariance", equivariance},
      {"model.real_form", real_form_consistency},
      {"model.hopf_curve_at_2pi", hopf_curve_endpoint},
      {"model.extended_curve_through_hopf_point", curves_meet},
      {"integrator.fourth_order", rk4_order},
      {"integrator.method_of_steps", method_of_steps},
      {"integrator.orbit_preserved", simulated_non_invasive},
      {"integrator.variational_linearity", variational_linearity},
      {"integrator.neutral_K2_zero", neutral_reduces_to_retarded},
      {"spectrum.trivial_root", trivial_floquet_root},
      {"spectrum.conjugate_symmetry", conjugate_symmetry},
      {"spectrum.count_matches_refined_roots", count_matches_roots},
      {"spectrum.reduction_chain", reduction_chain},
      {"spectrum.derivative_vs_difference", derivatives_match},
      {"spectrum.floquet_vs_monodromy", floquet_formula},
      {"hopf.mu2_pyragas", pyragas_mu2},
      {"hopf.mu2_lambda_axis", lambda_axis_mu2},
      {"hopf.direction_sign", direction_dichotomy},
      {"hopf.transversality_antisymmetry", transversality_antisymmetry},
      {"hopf.generic_vs_closed_form", vectors_and_c},
      {"hopf.tendency_vs_tracking", tendencies_track},
      {"hopf.curve_residual", hopf_curve_roots},
      {"charts.boundary_residual", boundary_on_axis},
      {"charts.flag_consistency", charts_monotone},
      {"charts.K2_zero_row_matches_retarded", chart_reduction},
      {"charts.neutral_verdict_K2_zero", verdict_reduction},
      {"charts.simulation_agreement", simulation_agrees},
  };
  return all;
}

std::vector<PropertyResult> run_all(std::uint64_t seed, unsigned jobs, const std::string& filter) {
  const auto& all = properties();
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (filter.empty() || all[k].name.find(filter) != std::string::npos) chosen.push_back(k);
  }
  std::vector<PropertyResult> out(chosen.size());
  parallel_for(chosen.size(), jobs, [&](std::size_t k) {
    const Property& p = all[chosen[k]];
    try {
      out[k] = p.run(seed + chosen[k]);
    } catch (const std::exception& e) {
      out[k] = {p.name, false, std::string("threw ") + e.what()};
    }
  });
  return out;
}

std::uint64_t seed_from_environment() {
  const char* s = std::getenv("PYRAGAS_LAB_SEED");
  if (s == nullptr || *s == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0') return kDefaultSeed;
  return v;
}

}  // namespace pyragas::verify
