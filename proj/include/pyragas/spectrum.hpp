#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pyragas/core.hpp"
#include "pyragas/model.hpp"

namespace pyragas {

// ---------------------------------------------------------------------------
// Characteristic functions (scalar-templated closed forms)

/// Linearisation of the controlled system at z = 0:
///   mu - (lambda + i) + K e^{i beta} (1 - e^{-mu tau}).
template <typename Scalar>
std::complex<Scalar> char_controlled(std::complex<Scalar> mu, const ModelParamsT<Scalar>& p,
                                     const RetardedControlT<Scalar>& c) {
  const std::complex<Scalar> shift{p.lambda, Scalar(1)};
  return mu - shift + c.K * unit_phase(c.beta) * (Scalar(1) - std::exp(-mu * c.tau));
}

template <typename Scalar>
std::complex<Scalar> char_controlled_derivative(std::complex<Scalar> mu,
                                                const ModelParamsT<Scalar>&,
                                                const RetardedControlT<Scalar>& c) {
  return Scalar(1) + c.K * unit_phase(c.beta) * c.tau * std::exp(-mu * c.tau);
}

/// Determinant of the 2x2 characteristic matrix of the linear variational
/// equation about the rotating wave. Its roots are the Floquet exponents.
template <typename Scalar>
std::complex<Scalar> char_variational(std::complex<Scalar> mu, const ModelParamsT<Scalar>& p,
                                      const RetardedControlT<Scalar>& c) {
  using std::cos;
  using std::sin;
  const std::complex<Scalar> e = Scalar(1) - std::exp(-mu * c.tau);
  const std::complex<Scalar> kc = c.K * cos(c.beta) * e;
  const std::complex<Scalar> ks = c.K * sin(c.beta) * e;
  return (mu + 2 * p.lambda + kc) * (mu + kc) + (2 * p.lambda * p.gamma + ks) * ks;
}

template <typename Scalar>
std::complex<Scalar> char_variational_derivative(std::complex<Scalar> mu,
                                                 const ModelParamsT<Scalar>& p,
                                                 const RetardedControlT<Scalar>& c) {
  using std::cos;
  using std::sin;
  const std::complex<Scalar> decay = std::exp(-mu * c.tau);
  const std::complex<Scalar> e = Scalar(1) - decay;
  const std::complex<Scalar> de = c.tau * decay;
  const Scalar kc = c.K * cos(c.beta);
  const Scalar ks = c.K * sin(c.beta);
  const std::complex<Scalar> a = mu + 2 * p.lambda + kc * e;
  const std::complex<Scalar> b = mu + kc * e;
  const std::complex<Scalar> da = Scalar(1) + kc * de;
  const std::complex<Scalar> g = 2 * p.lambda * p.gamma + ks * e;
  const std::complex<Scalar> d = ks * e;
  const std::complex<Scalar> dd = ks * de;
  return da * b + a * da + dd * d + g * dd;
}

/// Linearisation of the neutral-controlled system at z = 0.
template <typename Scalar>
std::complex<Scalar> char_neutral(std::complex<Scalar> mu, const ModelParamsT<Scalar>& p,
                                  const NeutralControlT<Scalar>& n) {
  const std::complex<Scalar> shift{p.lambda, Scalar(1)};
  const std::complex<Scalar> e = Scalar(1) - std::exp(-mu * n.tau);
  return mu - shift + n.gain1() * e + n.gain2() * mu * e;
}

template <typename Scalar>
std::complex<Scalar> char_neutral_derivative(std::complex<Scalar> mu, const ModelParamsT<Scalar>&,
                                             const NeutralControlT<Scalar>& n) {
  const std::complex<Scalar> decay = std::exp(-mu * n.tau);
  const std::complex<Scalar> e = Scalar(1) - decay;
  const std::complex<Scalar> de = n.tau * decay;
  return Scalar(1) + n.gain1() * de + n.gain2() * (e + mu * de);
}

template <typename Scalar>
std::complex<Scalar> char_uncontrolled(std::complex<Scalar> mu, const ModelParamsT<Scalar>& p) {
  return mu - std::complex<Scalar>{p.lambda, Scalar(1)};
}

// ---------------------------------------------------------------------------
// Type-erased characteristic function used by the root machinery

/// A holomorphic function with its analytic derivative. The four model
/// variants are built in; `custom` wraps any other pair (used for test
/// families and continuation).
class CharFunction {
 public:
  enum class Variant {
    UncontrolledEquilibrium,
    ControlledEquilibrium,
    VariationalFloquet,
    NeutralEquilibrium,
    Custom
  };

  static CharFunction uncontrolled(const ModelParams& p);
  static CharFunction controlled(const ModelParams& p, const RetardedControl& c);
  static CharFunction variational(const ModelParams& p, const RetardedControl& c);
  static CharFunction neutral(const ModelParams& p, const NeutralControl& n);
  static CharFunction custom(std::string name, std::function<Complex(Complex)> value,
                             std::function<Complex(Complex)> derivative);

  Complex operator()(Complex mu) const;
  Complex derivative(Complex mu) const;
  /// Sum of the magnitudes of the individual terms at mu; residual tests are
  /// relative to max(1, scale).
  double scale(Complex mu) const;

  Variant variant() const { return variant_; }
  const ModelParams& model() const { return model_; }
  const std::optional<RetardedControl>& retarded() const { return retarded_; }
  const std::optional<NeutralControl>& neutral_control() const { return neutral_; }
  const std::string& name() const { return name_; }
  /// True when f(conj mu) = conj f(mu) (real coefficients).
  bool conjugate_symmetric() const { return variant_ == Variant::VariationalFloquet; }

 private:
  CharFunction() = default;

  Variant variant_ = Variant::Custom;
  std::string name_;
  ModelParams model_{};
  std::optional<RetardedControl> retarded_;
  std::optional<NeutralControl> neutral_;
  std::function<Complex(Complex)> custom_value_;
  std::function<Complex(Complex)> custom_derivative_;
};

const char* to_string(CharFunction::Variant v);

// ---------------------------------------------------------------------------
// Root counting and refinement

struct SearchBox {
  double re_min = -5.0;
  double re_max = 2.0;
  double im_min = -20.0;
  double im_max = 20.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

void validate(const SearchBox& box);

struct Root {
  Complex mu;
  double residual = 0.0;
  int multiplicity = 1;
};

struct CountOptions {
  /// Newton-distance floor |f|/|f'| a boundary point must keep from any root.
  double boundary_floor = 1e-6;
  int max_perturbations = 3;
  /// Absolute tolerance per adaptive panel of the f'/f integral.
  double panel_tolerance = 1e-7;
  /// Largest admissible arg(f) increment between adjacent quadrature nodes.
  double max_arg_step = 0.5;
};

struct CountResult {
  int count = 0;
  double winding = 0.0;   // unrounded
  SearchBox box;          // the box actually integrated over (after perturbation)
  int evaluations = 0;
};

/// Argument-principle count of roots (with multiplicity) inside the box.
int count_roots(const CharFunction& f, const SearchBox& box, const CountOptions& opts = {});
CountResult count_roots_detailed(const CharFunction& f, const SearchBox& box,
                                 const CountOptions& opts = {});

/// Number of roots inside the circle |mu - center| = radius.
int count_in_circle(const CharFunction& f, Complex center, double radius, int nodes = 256);

struct FindOptions {
  int grid_n = 16;
  double newton_tolerance = 1e-12;
  double residual_tolerance = 1e-10;
  double dedupe_radius = 1e-6;
  double multiplicity_radius = 1e-4;
  int max_newton_iterations = 100;
  int max_depth = 6;
  CountOptions count{};
};

/// Newton from a grid of seeds; the total multiplicity of the result is
/// checked against count_roots (the box is subdivided until they agree).
std::vector<Root> find_roots(const CharFunction& f, const SearchBox& box, int grid_n = 16);
std::vector<Root> find_roots(const CharFunction& f, const SearchBox& box, const FindOptions& opts);

/// Newton iteration; returns nullopt when it does not converge.
std::optional<Complex> newton(const CharFunction& f, Complex seed, const FindOptions& opts = {},
                              double max_travel = std::numeric_limits<double>::infinity());

// ---------------------------------------------------------------------------
// Neutral essential spectrum and spectral gap

struct EssentialSpectrumReport {
  double radius = 0.0;
  bool stable_d = true;
};

EssentialSpectrumReport essential_spectrum(const NeutralControl& n);

struct SpectralGapReport {
  bool holds = false;
  SearchBox box;               // region Re >= gap that was censused
  std::vector<Root> roots;     // every root found there (excluded ones included)
  std::vector<Root> offending; // roots with Re >= gap that are not excluded
  std::optional<EssentialSpectrumReport> essential;
};

/// True iff every root in the box with Re >= gap lies within 1e-8 of an
/// excluded point; neutral variants additionally need a stable D-operator.
bool spectral_gap(const CharFunction& f, const SearchBox& box, const std::vector<Complex>& excluded,
                  double gap);
SpectralGapReport spectral_gap_report(const CharFunction& f, const SearchBox& box,
                                      const std::vector<Complex>& excluded, double gap,
                                      const FindOptions& opts = {});

/// A box that provably contains every root with Re mu >= gap for the
/// equilibrium variants (|e^{-mu tau}| is bounded there). `complete` is false
/// when no finite bound exists or it exceeded max_radius.
struct CensusBox {
  SearchBox box;
  bool complete = false;
};
CensusBox census_box(const CharFunction& f, double gap, double max_radius = 60.0);

// ---------------------------------------------------------------------------
// Floquet data of the uncontrolled orbit

struct FloquetReport {
  Complex exponents[2];
  Complex multipliers[2];
  double period = 0.0;
  /// The closed-form verdict: stable iff gamma * lambda > 1.
  bool stable = false;
  /// Set when 1 - gamma*lambda < 0, i.e. the formula is evaluated with a
  /// negative period.
  bool negative_period_warning = false;
};

FloquetReport floquet_uncontrolled(const ModelParams& p);

// ---------------------------------------------------------------------------
// Continuation

using CharFamily = std::function<CharFunction(double)>;

struct TrackOptions {
  double max_jump = 0.5;
  int max_bisections = 20;
  FindOptions newton{};
};

/// Follows a root of family(theta) across `thetas` by Newton continuation.
std::vector<Complex> track_root(const CharFamily& family, Complex mu0,
                                const std::vector<double>& thetas, const TrackOptions& opts = {});

}  // namespace pyragas
