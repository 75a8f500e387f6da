#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "pyragas/core.hpp"
#include "pyragas/model.hpp"

namespace pyragas {

/// Value and time derivative of a solution at one instant.
struct StateSample {
  Complex value;
  Complex derivative;
};

/// Initial data on [-tau, 0]. Neutral equations read the derivative as well.
using HistoryFunction = std::function<StateSample(double)>;

/// Right-hand side of a delay equation with a single constant delay:
/// (t, z(t), z(t - tau), zdot(t - tau)) -> zdot(t).
using DelayField = std::function<Complex(double, Complex, Complex, Complex)>;

/// Steps per delay used when the caller does not choose h.
inline constexpr std::size_t kDefaultStepsPerDelay = 1000;

struct IntegrationOptions {
  /// Integration stops early once |z| exceeds this radius (or turns non-finite).
  double escape_radius = std::numeric_limits<double>::infinity();
};

/// Dense, piecewise cubic Hermite solution. Each step owns its own endpoint
/// derivatives, so derivative jumps at multiples of the delay (neutral case)
/// are represented exactly.
class Trajectory {
 public:
  struct Segment {
    Complex z0, z1;
    Complex d0, d1;
  };

  Trajectory() = default;
  Trajectory(double t_start, double step, double delay, std::size_t steps_per_delay,
             HistoryFunction history);

  double t_start() const { return t_start_; }
  double t_end() const { return t_start_ + step_ * static_cast<double>(segments_.size()); }
  double step() const { return step_; }
  double delay() const { return delay_; }
  std::size_t steps_per_delay() const { return steps_per_delay_; }
  std::size_t size() const { return segments_.size(); }
  bool escaped() const { return escaped_; }
  bool has_history() const { return static_cast<bool>(history_); }

  const std::vector<Segment>& segments() const { return segments_; }
  /// Grid time of node k (node 0 is t_start).
  double node_time(std::size_t k) const { return t_start_ + step_ * static_cast<double>(k); }

  /// Value and derivative at t. Times before t_start are answered by the
  /// history function; the domain is [t_start - delay, t_end].
  StateSample query(double t) const;

  /// Value/derivative of step `segment` at local fraction s in [0, 1].
  StateSample at_local(std::ptrdiff_t segment, double s) const;

  // Used by the integrators.
  void append(const Segment& seg) { segments_.push_back(seg); }
  void mark_escaped() { escaped_ = true; }
  const HistoryFunction& history() const { return history_; }

 private:
  double t_start_ = 0.0;
  double step_ = 0.0;
  double delay_ = 0.0;
  std::size_t steps_per_delay_ = 0;
  HistoryFunction history_;
  std::vector<Segment> segments_;
  bool escaped_ = false;
};

/// Number of grid steps per delay for h = tau / n; throws unless tau/h is an
/// integer to within 1e-9 relative.
std::size_t steps_per_delay(double tau, double h);

/// Classical RK4 for the uncontrolled normal form.
Trajectory integrate_ode(const ModelParams& p, Complex z0, double t_end, double h,
                         const IntegrationOptions& opts = {});

/// Method of steps with RK4 stages; delayed values come from the dense output
/// (or the history on the first delay interval).
Trajectory integrate_dde(const ModelParams& p, const RetardedControl& c,
                         const HistoryFunction& hist, double t_end, double h,
                         const IntegrationOptions& opts = {});
Trajectory integrate_ndde(const ModelParams& p, const NeutralControl& n,
                          const HistoryFunction& hist, double t_end, double h,
                          const IntegrationOptions& opts = {});

/// The linear variational equation about the rotating wave (co-rotating
/// coordinates r + i phi).
Trajectory integrate_variational(const ModelParams& p, const RetardedControl& c,
                                 const HistoryFunction& hist, double t_end, double h);

/// Generic entry points shared by the wrappers above.
Trajectory integrate_delay(const DelayField& field, const HistoryFunction& hist, double tau,
                           double t_end, double h, const IntegrationOptions& opts = {});
void extend_delay(Trajectory& traj, const DelayField& field, double t_end,
                  const IntegrationOptions& opts = {});

/// Continue an existing DDE/NDDE trajectory to a later end time.
void extend_dde(Trajectory& traj, const ModelParams& p, const RetardedControl& c, double t_end,
                const IntegrationOptions& opts = {});
void extend_ndde(Trajectory& traj, const ModelParams& p, const NeutralControl& n, double t_end,
                 const IntegrationOptions& opts = {});

// ---------------------------------------------------------------------------
// Histories

HistoryFunction constant_history(Complex z);
/// The analytic orbit itself, with exact derivative.
HistoryFunction orbit_history(const PeriodicOrbit& orbit);
/// t -> R e^{i omega t}(1 + eps_r + i eps_phi).
HistoryFunction perturbed_orbit_history(const PeriodicOrbit& orbit, double eps_r, double eps_phi);

// ---------------------------------------------------------------------------
// Deviation from the target orbit

struct DeviationSeries {
  std::vector<double> t;
  std::vector<double> radial;  // |z| - R_p
  std::vector<double> phase;   // unwrapped arg z - omega_p t
  bool escaped = false;

  std::size_t size() const { return t.size(); }
};

DeviationSeries deviation(const Trajectory& traj, const PeriodicOrbit& orbit, double sample_dt);

enum class StabilityVerdict { Converging, Diverging, Inconclusive };

struct ClassifyOptions {
  double window_fraction = 0.1;
  double converge_ratio = 0.1;
  double diverge_ratio = 10.0;
};

/// Compares the peak radial deviation in the last and first windows of the
/// horizon. Series that escaped are Diverging.
StabilityVerdict classify(const DeviationSeries& series, double horizon,
                          const ClassifyOptions& opts = {});

const char* to_string(StabilityVerdict v);

}  // namespace pyragas
