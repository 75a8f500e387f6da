#include "pyragas/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pyragas {

namespace {

constexpr double kMinStep = 1e-12;

void check_step(double h, double t_end) {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("step h must be positive");
  if (h < kMinStep) throw StepUnderflow("step below 1e-12");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
}

StateSample hermite(const Trajectory::Segment& seg, double h, double s) {
  if (s == 0.0) return {seg.z0, seg.d0};
  if (s == 1.0) return {seg.z1, seg.d1};
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  const Complex value = h00 * seg.z0 + (h10 * h) * seg.d0 + h01 * seg.z1 + (h11 * h) * seg.d1;
  const Complex deriv = ((6 * s2 - 6 * s) / h) * seg.z0 + (3 * s2 - 4 * s + 1) * seg.d0 +
                        ((6 * s - 6 * s2) / h) * seg.z1 + (3 * s2 - 2 * s) * seg.d1;
  return {value, deriv};
}

bool escaped(Complex z, double radius) {
  return !std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > radius;
}

}  // namespace

Trajectory::Trajectory(double t_start, double step, double delay, std::size_t steps_per_delay,
                       HistoryFunction history)
    : t_start_(t_start),
      step_(step),
      delay_(delay),
      steps_per_delay_(steps_per_delay),
      history_(std::move(history)) {}

StateSample Trajectory::at_local(std::ptrdiff_t segment, double s) const {
  if (segment < 0) {
    if (!history_) throw DomainError("no history available before t_start");
    return history_(t_start_ + (static_cast<double>(segment) + s) * step_);
  }
  if (static_cast<std::size_t>(segment) >= segments_.size()) {
    throw DomainError("segment index beyond the integrated range");
  }
  return hermite(segments_[static_cast<std::size_t>(segment)], step_, s);
}

StateSample Trajectory::query(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < t_start_) {
    if (!history_ || t < t_start_ - delay_ - slack) {
      throw DomainError("query time before the trajectory domain");
    }
    return history_(std::max(t, t_start_ - delay_));
  }
  if (segments_.empty()) {
    if (history_ && t <= t_start_ + slack) return history_(t_start_);
    throw DomainError("empty trajectory");
  }
  if (t > t_end() + slack) throw DomainError("query time after the trajectory domain");
  const double x = (t - t_start_) / step_;
  auto k = static_cast<std::ptrdiff_t>(std::floor(x));
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(segments_.size()) - 1);
  const double s = std::clamp(x - static_cast<double>(k), 0.0, 1.0);
  return hermite(segments_[static_cast<std::size_t>(k)], step_, s);
}

std::size_t steps_per_delay(double tau, double h) {
  if (!(tau > 0)) throw DomainError("delay must be positive");
  if (!(h > 0)) throw DomainError("step h must be positive");
  const double ratio = tau / h;
  const double n = std::round(ratio);
  if (n < 1 || std::abs(ratio - n) > 1e-9 * n) {
    throw DomainError("step h must divide the delay tau exactly (h = tau / n)");
  }
  return static_cast<std::size_t>(n);
}

void extend_delay(Trajectory& traj, const DelayField& field, double t_end,
                  const IntegrationOptions& opts) {
  if (traj.escaped()) return;
  const double h = traj.step();
  const auto n = static_cast<std::ptrdiff_t>(traj.steps_per_delay());
  const auto total = static_cast<std::size_t>(std::ceil((t_end - traj.t_start()) / h - 1e-9));

  Complex z = traj.size() == 0 ? traj.history()(traj.t_start()).value
                               : traj.segments().back().z1;

  auto delayed = [&](std::ptrdiff_t k, double s) -> StateSample {
    if (n == 0) return {Complex{}, Complex{}};
    return traj.at_local(k - n, s);
  };

  for (std::size_t k = traj.size(); k < total; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    const double t = traj.node_time(k);
    const StateSample lag0 = delayed(kk, 0.0);
    const StateSample lag_mid = delayed(kk, 0.5);
    const StateSample lag1 = delayed(kk, 1.0);

    const Complex k1 = field(t, z, lag0.value, lag0.derivative);
    const Complex k2 = field(t + 0.5 * h, z + (0.5 * h) * k1, lag_mid.value, lag_mid.derivative);
    const Complex k3 = field(t + 0.5 * h, z + (0.5 * h) * k2, lag_mid.value, lag_mid.derivative);
    const Complex k4 = field(t + h, z + h * k3, lag1.value, lag1.derivative);
    const Complex z1 = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!std::isfinite(z1.real()) || !std::isfinite(z1.imag())) {
      traj.mark_escaped();
      return;
    }
    const Complex d1 = field(t + h, z1, lag1.value, lag1.derivative);
    traj.append({z, z1, k1, d1});
    z = z1;
    if (escaped(z, opts.escape_radius)) {
      traj.mark_escaped();
      return;
    }
  }
}

Trajectory integrate_delay(const DelayField& field, const HistoryFunction& hist, double tau,
                           double t_end, double h, const IntegrationOptions& opts) {
  if (!hist) throw DomainError("history function undefined on [-tau, 0]");
  check_step(h, t_end);
  const std::size_t n = tau > 0 ? steps_per_delay(tau, h) : 0;
  Trajectory traj(0.0, h, tau, n, hist);
  extend_delay(traj, field, t_end, opts);
  return traj;
}

Trajectory integrate_ode(const ModelParams& p, Complex z0, double t_end, double h,
                         const IntegrationOptions& opts) {
  validate(p);
  const DelayField field = [p](double, Complex z, Complex, Complex) {
    return uncontrolled_rhs(z, p);
  };
  check_step(h, t_end);
  Trajectory traj(0.0, h, 0.0, 0, constant_history(z0));
  extend_delay(traj, field, t_end, opts);
  return traj;
}

namespace {

DelayField retarded_field(const ModelParams& p, const RetardedControl& c) {
  return [p, c](double, Complex z, Complex zd, Complex) { return controlled_rhs(z, zd, p, c); };
}

DelayField neutral_field(const ModelParams& p, const NeutralControl& n) {
  return [p, n](double, Complex z, Complex zd, Complex dd) {
    return neutral_rhs(z, zd, dd, p, n);
  };
}

}  // namespace

Trajectory integrate_dde(const ModelParams& p, const RetardedControl& c,
                         const HistoryFunction& hist, double t_end, double h,
                         const IntegrationOptions& opts) {
  validate(p);
  validate(c);
  return integrate_delay(retarded_field(p, c), hist, c.tau, t_end, h, opts);
}

Trajectory integrate_ndde(const ModelParams& p, const NeutralControl& n,
                          const HistoryFunction& hist, double t_end, double h,
                          const IntegrationOptions& opts) {
  validate(p);
  validate(n);
  return integrate_delay(neutral_field(p, n), hist, n.tau, t_end, h, opts);
}

Trajectory integrate_variational(const ModelParams& p, const RetardedControl& c,
                                 const HistoryFunction& hist, double t_end, double h) {
  validate(p);
  validate(c);
  const DelayField field = [p, c](double, Complex w, Complex wd, Complex) {
    return variational_rhs(w, wd, p, c);
  };
  return integrate_delay(field, hist, c.tau, t_end, h);
}

void extend_dde(Trajectory& traj, const ModelParams& p, const RetardedControl& c, double t_end,
                const IntegrationOptions& opts) {
  if (std::abs(traj.delay() - c.tau) > 1e-12 * c.tau) {
    throw DomainError("control delay differs from the trajectory delay");
  }
  extend_delay(traj, retarded_field(p, c), t_end, opts);
}

void extend_ndde(Trajectory& traj, const ModelParams& p, const NeutralControl& n, double t_end,
                 const IntegrationOptions& opts) {
  if (std::abs(traj.delay() - n.tau) > 1e-12 * n.tau) {
    throw DomainError("control delay differs from the trajectory delay");
  }
  extend_delay(traj, neutral_field(p, n), t_end, opts);
}

HistoryFunction constant_history(Complex z) {
  return [z](double) { return StateSample{z, Complex{}}; };
}

HistoryFunction orbit_history(const PeriodicOrbit& orbit) {
  return perturbed_orbit_history(orbit, 0.0, 0.0);
}

HistoryFunction perturbed_orbit_history(const PeriodicOrbit& orbit, double eps_r,
                                        double eps_phi) {
  if (!(std::abs(eps_r) < 0.5) || !(std::abs(eps_phi) < 0.5)) {
    throw DomainError("perturbation amplitudes must be below 0.5");
  }
  const Complex factor{1.0 + eps_r, eps_phi};
  return [orbit, factor](double t) {
    return StateSample{orbit.at(t) * factor, orbit.derivative_at(t) * factor};
  };
}

DeviationSeries deviation(const Trajectory& traj, const PeriodicOrbit& orbit, double sample_dt) {
  if (!(sample_dt > 0)) throw DomainError("sample_dt must be positive");
  DeviationSeries out;
  out.escaped = traj.escaped();
  const double t0 = traj.t_start();
  const double span = traj.t_end() - t0;
  const auto count = static_cast<std::size_t>(std::floor(span / sample_dt + 1e-9)) + 1;
  out.t.reserve(count);
  out.radial.reserve(count);
  out.phase.reserve(count);

  double unwrapped = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::min(t0 + sample_dt * static_cast<double>(i), traj.t_end());
    const Complex z = traj.query(t).value;
    const double r = std::abs(z);
    if (r < 1e-12) throw UndefinedPhase("|z| < 1e-12 at t = " + std::to_string(t));
    const double angle = std::arg(z);
    if (i == 0) {
      unwrapped = angle;
    } else {
      double delta = angle - previous;
      delta -= 2 * std::numbers::pi * std::round(delta / (2 * std::numbers::pi));
      unwrapped += delta;
    }
    previous = angle;
    out.t.push_back(t);
    out.radial.push_back(r - orbit.radius);
    out.phase.push_back(unwrapped - orbit.omega * t);
  }
  return out;
}

StabilityVerdict classify(const DeviationSeries& series, double horizon,
                          const ClassifyOptions& opts) {
  if (series.escaped) return StabilityVerdict::Diverging;
  if (series.size() < 2) throw DomainError("deviation series too short");
  if (!(horizon > 0)) throw DomainError("horizon must be positive");
  const double t0 = series.t.front();
  if (series.t.back() < t0 + horizon * (1 - 1e-9)) {
    throw DomainError("deviation series shorter than the horizon");
  }
  const double first_end = t0 + opts.window_fraction * horizon;
  const double last_begin = t0 + (1 - opts.window_fraction) * horizon;
  const double last_end = t0 + horizon * (1 + 1e-12);
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.t[i];
    const double dev = std::abs(series.radial[i]);
    if (t <= first_end) first = std::max(first, dev);
    if (t >= last_begin && t <= last_end) last = std::max(last, dev);
  }
  if (first == 0.0) return last == 0.0 ? StabilityVerdict::Inconclusive : StabilityVerdict::Diverging;
  const double ratio = last / first;
  if (ratio <= opts.converge_ratio) return StabilityVerdict::Converging;
  if (ratio >= opts.diverge_ratio) return StabilityVerdict::Diverging;
  return StabilityVerdict::Inconclusive;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::Converging:
      return "Converging";
    case StabilityVerdict::Diverging:
      return "Diverging";
    case StabilityVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

}  // namespace pyragas
