#include "pyragas/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace pyragas {

// ---------------------------------------------------------------------------
// CharFunction

CharFunction CharFunction::uncontrolled(const ModelParams& p) {
  validate(p);
  CharFunction f;
  f.variant_ = Variant::UncontrolledEquilibrium;
  f.name_ = to_string(f.variant_);
  f.model_ = p;
  return f;
}

CharFunction CharFunction::controlled(const ModelParams& p, const RetardedControl& c) {
  validate(p);
  validate(c);
  CharFunction f;
  f.variant_ = Variant::ControlledEquilibrium;
  f.name_ = to_string(f.variant_);
  f.model_ = p;
  f.retarded_ = c;
  return f;
}

CharFunction CharFunction::variational(const ModelParams& p, const RetardedControl& c) {
  validate(p);
  validate(c);
  CharFunction f;
  f.variant_ = Variant::VariationalFloquet;
  f.name_ = to_string(f.variant_);
  f.model_ = p;
  f.retarded_ = c;
  return f;
}

CharFunction CharFunction::neutral(const ModelParams& p, const NeutralControl& n) {
  validate(p);
  validate(n);
  CharFunction f;
  f.variant_ = Variant::NeutralEquilibrium;
  f.name_ = to_string(f.variant_);
  f.model_ = p;
  f.neutral_ = n;
  return f;
}

CharFunction CharFunction::custom(std::string name, std::function<Complex(Complex)> value,
                                  std::function<Complex(Complex)> derivative) {
  if (!value || !derivative) throw DomainError("custom characteristic function needs f and f'");
  CharFunction f;
  f.variant_ = Variant::Custom;
  f.name_ = std::move(name);
  f.custom_value_ = std::move(value);
  f.custom_derivative_ = std::move(derivative);
  return f;
}

Complex CharFunction::operator()(Complex mu) const {
  switch (variant_) {
    case Variant::UncontrolledEquilibrium:
      return char_uncontrolled(mu, model_);
    case Variant::ControlledEquilibrium:
      return char_controlled(mu, model_, *retarded_);
    case Variant::VariationalFloquet:
      return char_variational(mu, model_, *retarded_);
    case Variant::NeutralEquilibrium:
      return char_neutral(mu, model_, *neutral_);
    case Variant::Custom:
      return custom_value_(mu);
  }
  return {};
}

Complex CharFunction::derivative(Complex mu) const {
  switch (variant_) {
    case Variant::UncontrolledEquilibrium:
      return {1.0, 0.0};
    case Variant::ControlledEquilibrium:
      return char_controlled_derivative(mu, model_, *retarded_);
    case Variant::VariationalFloquet:
      return char_variational_derivative(mu, model_, *retarded_);
    case Variant::NeutralEquilibrium:
      return char_neutral_derivative(mu, model_, *neutral_);
    case Variant::Custom:
      return custom_derivative_(mu);
  }
  return {};
}

double CharFunction::scale(Complex mu) const {
  const double shift = std::abs(Complex{model_.lambda, 1.0});
  switch (variant_) {
    case Variant::UncontrolledEquilibrium:
      return std::abs(mu) + shift;
    case Variant::ControlledEquilibrium: {
      const auto& c = *retarded_;
      return std::abs(mu) + shift + std::abs(c.K) * (1 + std::abs(std::exp(-mu * c.tau)));
    }
    case Variant::VariationalFloquet: {
      const auto& c = *retarded_;
      const double e = 1 + std::abs(std::exp(-mu * c.tau));
      const double a = std::abs(mu) + 2 * std::abs(model_.lambda) + std::abs(c.K) * e;
      const double b = 2 * std::abs(model_.lambda * model_.gamma) + std::abs(c.K) * e;
      return a * a + b * std::abs(c.K) * e;
    }
    case Variant::NeutralEquilibrium: {
      const auto& n = *neutral_;
      const double e = 1 + std::abs(std::exp(-mu * n.tau));
      return std::abs(mu) + shift + std::abs(n.K1) * e + std::abs(n.K2) * std::abs(mu) * e;
    }
    case Variant::Custom:
      return std::abs(custom_value_(mu));
  }
  return 0.0;
}

const char* to_string(CharFunction::Variant v) {
  switch (v) {
    case CharFunction::Variant::UncontrolledEquilibrium:
      return "uncontrolled";
    case CharFunction::Variant::ControlledEquilibrium:
      return "controlled";
    case CharFunction::Variant::VariationalFloquet:
      return "variational";
    case CharFunction::Variant::NeutralEquilibrium:
      return "neutral";
    case CharFunction::Variant::Custom:
      return "custom";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Argument principle

void validate(const SearchBox& box) {
  const bool finite = std::isfinite(box.re_min) && std::isfinite(box.re_max) &&
                      std::isfinite(box.im_min) && std::isfinite(box.im_max);
  if (!finite || !(box.re_max > box.re_min) || !(box.im_max > box.im_min)) {
    throw DomainError("search box must be a nonempty finite rectangle");
  }
}

namespace {

constexpr double kTwoPi = two_pi_v<double>;

struct EdgeNode {
  Complex z;
  Complex f;
  Complex df;
};

class BoundaryHit {
 public:
  explicit BoundaryHit(Complex z) : z_(z) {}
  Complex where() const { return z_; }

 private:
  Complex z_;
};

/// Principal-branch increment of arg f from a to b.
double arg_step(Complex fa, Complex fb) { return std::arg(fb / fa); }

/// Change of arg f along the straight segment [a, b]. Panels are bisected
/// until the trapezoid value of Im(f'/f dz) agrees with the logarithmic
/// increment, the increment is small, and the step stays inside the
/// Newton-distance disk of both endpoints.
double edge_winding(const CharFunction& f, Complex a, Complex b, const CountOptions& opts,
                    int& evaluations) {
  auto node = [&](Complex z) {
    ++evaluations;
    EdgeNode n{z, f(z), f.derivative(z)};
    if (!std::isfinite(n.f.real()) || !std::isfinite(n.f.imag())) {
      throw NonIntegerWinding("characteristic function not finite on the contour");
    }
    const double fa = std::abs(n.f);
    const double da = std::abs(n.df);
    if (fa == 0.0 || fa <= opts.boundary_floor * da) throw BoundaryHit(z);
    return n;
  };
  auto newton_distance = [](const EdgeNode& n) {
    const double da = std::abs(n.df);
    return da == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(n.f) / da;
  };

  const double length = std::abs(b - a);
  const int initial = std::max(8, static_cast<int>(std::ceil(length / 0.25)));
  std::vector<EdgeNode> pending;
  pending.reserve(64);

  double total = 0.0;
  EdgeNode left = node(a);
  for (int i = 1; i <= initial; ++i) {
    const Complex target = a + (b - a) * (static_cast<double>(i) / initial);
    pending.clear();
    pending.push_back(node(target));
    while (!pending.empty()) {
      const EdgeNode& right = pending.back();
      const Complex dz = right.z - left.z;
      const double h = std::abs(dz);
      const double darg = arg_step(left.f, right.f);
      const double trap = 0.5 * std::imag((left.df / left.f + right.df / right.f) * dz);
      const double reach = 0.5 * std::min(newton_distance(left), newton_distance(right));
      const bool fine = std::abs(darg) <= opts.max_arg_step &&
                        std::abs(trap - darg) <= std::max(opts.panel_tolerance, 0.05) &&
                        h <= reach;
      if (fine) {
        total += darg;
        left = right;
        pending.pop_back();
        continue;
      }
      if (h < 1e-11 * std::max(1.0, std::abs(left.z))) throw BoundaryHit(left.z);
      if (pending.size() > 200) throw BoundaryHit(left.z);
      pending.push_back(node(0.5 * (left.z + right.z)));
    }
  }
  return total;
}

double box_winding(const CharFunction& f, const SearchBox& box, const CountOptions& opts,
                   int& evaluations) {
  const Complex c0{box.re_min, box.im_min};
  const Complex c1{box.re_max, box.im_min};
  const Complex c2{box.re_max, box.im_max};
  const Complex c3{box.re_min, box.im_max};
  double total = edge_winding(f, c0, c1, opts, evaluations);
  total += edge_winding(f, c1, c2, opts, evaluations);
  total += edge_winding(f, c2, c3, opts, evaluations);
  total += edge_winding(f, c3, c0, opts, evaluations);
  return total / kTwoPi;
}

SearchBox expand(const SearchBox& box, int attempt) {
  // Asymmetric outward nudges so that a root sitting on one edge is not
  // simply moved onto another.
  static constexpr std::array<double, 4> kWeights{1.0, 1.37, 0.71, 1.13};
  const double unit = 1e-3 * std::max(1.0, std::max(box.width(), box.height()) * 0.01) *
                      static_cast<double>(attempt);
  SearchBox out = box;
  out.re_min -= unit * kWeights[0];
  out.re_max += unit * kWeights[1];
  out.im_min -= unit * kWeights[2];
  out.im_max += unit * kWeights[3];
  return out;
}

}  // namespace

CountResult count_roots_detailed(const CharFunction& f, const SearchBox& box,
                                 const CountOptions& opts) {
  validate(box);
  CountResult result;
  SearchBox current = box;
  for (int attempt = 0;; ++attempt) {
    try {
      const double w = box_winding(f, current, opts, result.evaluations);
      const double rounded = std::round(w);
      if (std::abs(w - rounded) > 0.25 || rounded < 0) {
        throw NonIntegerWinding("winding number " + std::to_string(w) + " is not a count");
      }
      result.count = static_cast<int>(rounded);
      result.winding = w;
      result.box = current;
      return result;
    } catch (const BoundaryHit& hit) {
      if (attempt >= opts.max_perturbations) {
        throw BoundaryRoot("root within tolerance of the contour near (" +
                           std::to_string(hit.where().real()) + ", " +
                           std::to_string(hit.where().imag()) + ")");
      }
      current = expand(box, attempt + 1);
    }
  }
}

int count_roots(const CharFunction& f, const SearchBox& box, const CountOptions& opts) {
  return count_roots_detailed(f, box, opts).count;
}

int count_in_circle(const CharFunction& f, Complex center, double radius, int nodes) {
  if (!(radius > 0) || nodes < 8) throw DomainError("circle count needs radius > 0, nodes >= 8");
  double total = 0.0;
  Complex prev = f(center + radius);
  const Complex first = prev;
  for (int k = 1; k <= nodes; ++k) {
    const Complex cur = k == nodes ? first : f(center + radius * unit_phase(kTwoPi * k / nodes));
    if (cur == 0.0 || prev == 0.0) throw BoundaryRoot("root on the multiplicity circle");
    total += arg_step(prev, cur);
    prev = cur;
  }
  const double w = total / kTwoPi;
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.25) throw NonIntegerWinding("circle winding is not an integer");
  return static_cast<int>(rounded);
}

// ---------------------------------------------------------------------------
// Newton and root finding

std::optional<Complex> newton(const CharFunction& f, Complex seed, const FindOptions& opts,
                              double max_travel) {
  Complex mu = seed;
  for (int it = 0; it < opts.max_newton_iterations; ++it) {
    const Complex value = f(mu);
    const Complex slope = f.derivative(mu);
    if (slope == 0.0 || !std::isfinite(std::abs(value))) return std::nullopt;
    const Complex step = value / slope;
    mu -= step;
    if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) return std::nullopt;
    if (std::abs(mu - seed) > max_travel) return std::nullopt;
    if (std::abs(step) <= opts.newton_tolerance * std::max(1.0, std::abs(mu))) {
      const double residual = std::abs(f(mu));
      if (residual <= opts.residual_tolerance * std::max(1.0, f.scale(mu))) return mu;
      return std::nullopt;
    }
  }
  // Multiple roots converge only linearly; accept on the residual alone.
  const double residual = std::abs(f(mu));
  if (residual <= opts.residual_tolerance * std::max(1.0, f.scale(mu))) return mu;
  return std::nullopt;
}

namespace {

bool within(const SearchBox& box, Complex z, double slack) {
  return z.real() >= box.re_min - slack && z.real() <= box.re_max + slack &&
         z.imag() >= box.im_min - slack && z.imag() <= box.im_max + slack;
}

void add_unique(std::vector<Complex>& roots, Complex mu, double radius) {
  for (const Complex& r : roots) {
    if (std::abs(r - mu) <= radius) return;
  }
  roots.push_back(mu);
}

void seed_box(const CharFunction& f, const SearchBox& box, const FindOptions& opts,
              std::vector<Complex>& out) {
  const int n = std::max(opts.grid_n, 2);
  const double dx = box.width() / n;
  const double dy = box.height() / n;
  const double travel = 2.0 * std::max(box.width(), box.height());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex seed{box.re_min + (i + 0.5) * dx, box.im_min + (j + 0.5) * dy};
      if (auto mu = newton(f, seed, opts, travel)) {
        if (within(box, *mu, 1e-9)) add_unique(out, *mu, opts.dedupe_radius);
      }
    }
  }
}

int total_multiplicity(const std::vector<Root>& roots) {
  return std::accumulate(roots.begin(), roots.end(), 0,
                         [](int s, const Root& r) { return s + r.multiplicity; });
}

std::vector<Root> finalize(const CharFunction& f, const std::vector<Complex>& points,
                           const SearchBox& box, const FindOptions& opts) {
  std::vector<Root> roots;
  for (const Complex& mu : points) {
    if (!within(box, mu, 0.0)) continue;
    Root r;
    r.mu = mu;
    r.residual = std::abs(f(mu));
    r.multiplicity = std::max(1, count_in_circle(f, mu, opts.multiplicity_radius));
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (a.mu.real() != b.mu.real()) return a.mu.real() > b.mu.real();
    return a.mu.imag() < b.mu.imag();
  });
  return roots;
}

void search(const CharFunction& f, const SearchBox& box, const FindOptions& opts, int depth,
            std::vector<Complex>& found) {
  const CountResult census = count_roots_detailed(f, box, opts.count);
  if (census.count == 0) return;
  std::vector<Complex> local;
  seed_box(f, census.box, opts, local);
  for (const Complex& mu : found) {
    if (within(census.box, mu, 0.0)) add_unique(local, mu, opts.dedupe_radius);
  }
  if (total_multiplicity(finalize(f, local, census.box, opts)) == census.count) {
    for (const Complex& mu : local) add_unique(found, mu, opts.dedupe_radius);
    return;
  }
  if (depth >= opts.max_depth) {
    throw CountMismatch("root search found fewer roots than the contour count " +
                        std::to_string(census.count));
  }
  const double xm = 0.5 * (box.re_min + box.re_max) + 1.3e-4 * box.width();
  const double ym = 0.5 * (box.im_min + box.im_max) - 0.7e-4 * box.height();
  const SearchBox quads[4] = {{box.re_min, xm, box.im_min, ym},
                              {xm, box.re_max, box.im_min, ym},
                              {box.re_min, xm, ym, box.im_max},
                              {xm, box.re_max, ym, box.im_max}};
  for (const SearchBox& q : quads) search(f, q, opts, depth + 1, found);
}

}  // namespace

std::vector<Root> find_roots(const CharFunction& f, const SearchBox& box, int grid_n) {
  FindOptions opts;
  opts.grid_n = grid_n;
  return find_roots(f, box, opts);
}

std::vector<Root> find_roots(const CharFunction& f, const SearchBox& box,
                             const FindOptions& opts) {
  validate(box);
  if (opts.grid_n < 8) throw DomainError("grid_n must be at least 8");
  const CountResult census = count_roots_detailed(f, box, opts.count);
  std::vector<Complex> found;
  if (census.count > 0) {
    seed_box(f, census.box, opts, found);
    if (total_multiplicity(finalize(f, found, census.box, opts)) != census.count) {
      search(f, census.box, opts, 0, found);
    }
  }
  std::vector<Root> roots = finalize(f, found, census.box, opts);
  if (total_multiplicity(roots) != census.count) {
    throw CountMismatch("found multiplicity " + std::to_string(total_multiplicity(roots)) +
                        " but the contour count is " + std::to_string(census.count));
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Essential spectrum, spectral gap, census boxes

EssentialSpectrumReport essential_spectrum(const NeutralControl& n) {
  const Complex lead = n.leading();
  if (std::abs(lead) <= std::numeric_limits<double>::epsilon()) {
    throw DenominatorZero("1 + K2 e^{i beta2} vanishes");
  }
  EssentialSpectrumReport r;
  r.radius = std::abs(n.gain2() / lead);
  r.stable_d = r.radius < 1.0;
  return r;
}

SpectralGapReport spectral_gap_report(const CharFunction& f, const SearchBox& box,
                                      const std::vector<Complex>& excluded, double gap,
                                      const FindOptions& opts) {
  validate(box);
  if (!(gap < 0)) throw DomainError("spectral gap abscissa must be negative");
  SpectralGapReport report;
  report.holds = true;
  if (f.variant() == CharFunction::Variant::NeutralEquilibrium) {
    report.essential = essential_spectrum(*f.neutral_control());
    if (!report.essential->stable_d) report.holds = false;
  }
  report.box = box;
  report.box.re_min = std::max(box.re_min, gap);
  if (report.box.re_min >= report.box.re_max) return report;

  report.roots = find_roots(f, report.box, opts);
  for (const Root& r : report.roots) {
    if (r.mu.real() < gap) continue;
    const bool skip = std::any_of(excluded.begin(), excluded.end(),
                                  [&](Complex e) { return std::abs(e - r.mu) <= 1e-8; });
    if (!skip) report.offending.push_back(r);
  }
  if (!report.offending.empty()) report.holds = false;
  return report;
}

bool spectral_gap(const CharFunction& f, const SearchBox& box, const std::vector<Complex>& excluded,
                  double gap) {
  return spectral_gap_report(f, box, excluded, gap).holds;
}

CensusBox census_box(const CharFunction& f, double gap, double max_radius) {
  const SearchBox fallback{gap, 2.0, -20.0, 20.0};
  const double shift = std::abs(Complex{f.model().lambda, 1.0});
  double bound = std::numeric_limits<double>::infinity();
  switch (f.variant()) {
    case CharFunction::Variant::UncontrolledEquilibrium:
      bound = shift;
      break;
    case CharFunction::Variant::ControlledEquilibrium: {
      const auto& c = *f.retarded();
      const double q = std::exp(-gap * c.tau);
      bound = shift + std::abs(c.K) * (1 + q);
      break;
    }
    case CharFunction::Variant::NeutralEquilibrium: {
      const auto& n = *f.neutral_control();
      const double q = std::exp(-gap * n.tau);
      const double denom = std::abs(n.leading()) - std::abs(n.K2) * q;
      if (denom > 0) bound = (shift + std::abs(n.K1) * (1 + q)) / denom;
      break;
    }
    default:
      break;
  }
  CensusBox out;
  if (!std::isfinite(bound) || bound > max_radius) {
    out.box = fallback;
    out.complete = false;
    return out;
  }
  // Pad so that roots on the bound itself stay strictly inside.
  const double r = bound * 1.01 + 0.05;
  out.box = SearchBox{gap, std::max(r, gap + 0.1), -r, r};
  out.complete = true;
  return out;
}

// ---------------------------------------------------------------------------
// Floquet

FloquetReport floquet_uncontrolled(const ModelParams& p) {
  validate(p);
  if (!(p.lambda < 0)) throw DomainError("the rotating wave exists only for lambda < 0");
  const double omega = 1.0 - p.gamma * p.lambda;
  if (omega == 0.0) throw DomainError("orbit frequency 1 - gamma*lambda vanishes");
  FloquetReport r;
  r.period = kTwoPi / omega;
  r.exponents[0] = 0.0;
  r.exponents[1] = -2.0 * p.lambda;
  r.multipliers[0] = 1.0;
  r.multipliers[1] = std::exp(-2.0 * p.lambda * r.period);
  r.stable = p.gamma * p.lambda > 1.0;
  r.negative_period_warning = omega < 0;
  return r;
}

// ---------------------------------------------------------------------------
// Continuation

namespace {

std::optional<Complex> continue_step(const CharFamily& family, Complex from, double theta0,
                                     double theta1, const TrackOptions& opts, int depth) {
  const CharFunction f = family(theta1);
  if (auto mu = newton(f, from, opts.newton, opts.max_jump)) {
    if (std::abs(*mu - from) <= opts.max_jump) return mu;
  }
  if (depth >= opts.max_bisections) return std::nullopt;
  const double mid = 0.5 * (theta0 + theta1);
  auto half = continue_step(family, from, theta0, mid, opts, depth + 1);
  if (!half) return std::nullopt;
  return continue_step(family, *half, mid, theta1, opts, depth + 1);
}

}  // namespace

std::vector<Complex> track_root(const CharFamily& family, Complex mu0,
                                const std::vector<double>& thetas, const TrackOptions& opts) {
  if (thetas.empty()) return {};
  const CharFunction f0 = family(thetas.front());
  if (std::abs(f0(mu0)) > opts.newton.residual_tolerance * std::max(1.0, f0.scale(mu0))) {
    throw DomainError("the starting point is not a root of the first family member");
  }
  std::vector<Complex> path;
  path.reserve(thetas.size());
  path.push_back(mu0);
  for (std::size_t k = 1; k < thetas.size(); ++k) {
    auto next = continue_step(family, path.back(), thetas[k - 1], thetas[k], opts, 0);
    if (!next) {
      throw ContinuationBreakdown("lost the root at theta = " + std::to_string(thetas[k]));
    }
    path.push_back(*next);
  }
  return path;
}

}  // namespace pyragas
