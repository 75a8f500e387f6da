#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pyragas/core.hpp"
#include "pyragas/integrator.hpp"
#include "pyragas/model.hpp"
#include "pyragas/spectrum.hpp"

namespace pyragas {

/// Regular grid; an axis with a single point sits at the middle of its range.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  int nx = 2;
  int ny = 2;

  double x(int i) const;
  double y(int j) const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

void validate(const GridSpec& g);

enum class CellVerdict { Stable, Unstable };
const char* to_string(CellVerdict v);

struct RegionCell {
  double x = 0.0;
  double y = 0.0;
  bool inside_boundary = false;
  bool stable_d = false;
  bool sign_condition = false;
  bool spectral_gap = false;
  double sign_value = 0.0;
  CellVerdict verdict = CellVerdict::Unstable;
};

/// Stable iff every flag holds.
CellVerdict cell_verdict(const RegionCell& c);

// ---------------------------------------------------------------------------
// Retarded necessary condition

struct NecessaryCondition {
  double value = 0.0;
  bool satisfied = false;
};

/// 1 + tau K (cos beta + gamma sin beta) with tau = 2 pi / (1 - gamma lambda);
/// c.tau is not used.
NecessaryCondition necessary_condition(const ModelParams& p, const RetardedControl& c);

// ---------------------------------------------------------------------------
// Neutral boundary

struct BoundarySample {
  double omega = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
};

/// Gains (K1, K2) for which i*omega is a root at lambda = 0, tau = 2 pi.
std::vector<BoundarySample> ndde_boundary(double beta, const std::vector<double>& omegas);
/// The same with distinct phases (requires cos(beta1 - beta2) != 0).
std::vector<BoundarySample> ndde_boundary(double beta1, double beta2,
                                          const std::vector<double>& omegas);

/// n equispaced frequencies in (0, 2) with omega = 1 inserted.
std::vector<double> default_omegas(int n = 400);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// The closed loop cut out of the boundary curve by its self-intersection
/// that encloses the origin (zero gains). Empty if there is none.
std::vector<Point2> boundary_loop(const std::vector<BoundarySample>& samples);
bool point_in_polygon(const std::vector<Point2>& polygon, Point2 p);

// ---------------------------------------------------------------------------
// Charts

enum class InsideMode { Auto, Polygon, Census };

struct ChartOptions {
  InsideMode mode = InsideMode::Auto;
  /// Abscissa for census counts: roots with Re >= gap other than i are
  /// disqualifying.
  double gap = -1e-4;
  int omegas = 400;
  unsigned jobs = 0;  // 0 = hardware concurrency
  CountOptions count{};
};

enum class ChartKind { Neutral, Retarded };

struct Chart {
  ChartKind kind = ChartKind::Neutral;
  GridSpec grid;
  double gamma = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  InsideMode mode_used = InsideMode::Polygon;
  std::vector<RegionCell> cells;        // row-major, j (y) outer
  std::vector<BoundarySample> boundary; // neutral charts only
  std::vector<Point2> loop;             // polygon mode only

  const RegionCell& at(int i, int j) const {
    return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.nx) +
                 static_cast<std::size_t>(i)];
  }
  std::size_t stable_count() const;
};

/// (K1, K2) chart at lambda = 0, tau = 2 pi.
Chart neutral_chart(double gamma, double beta1, double beta2, const GridSpec& grid,
                    const ChartOptions& opts = {});
/// (lambda, K) chart; lambda must be negative across the grid.
Chart retarded_chart(double gamma, double beta, const GridSpec& grid,
                     const ChartOptions& opts = {});

/// Number of roots with Re mu >= gap in the census box, and whether the box
/// is a proven bound.
struct CensusCount {
  int count = 0;
  bool complete = false;
};
CensusCount census_count(const CharFunction& f, double gap, const CountOptions& opts = {});

// ---------------------------------------------------------------------------
// Simulation cross-check

struct CrossValidateOptions {
  int samples_x = 5;
  int samples_y = 5;
  double periods = 60.0;
  double eps_r = 0.05;
  double eps_phi = 0.0;
  /// Used for neutral charts; retarded charts simulate at the cell's lambda.
  double lambda = -0.005;
  int steps_per_period = 200;
  /// Escape radius in units of the orbit radius.
  double tube = 2.0;
  unsigned jobs = 0;
  ClassifyOptions classify{};
};

struct CrossValidateEntry {
  int i = 0;
  int j = 0;
  double x = 0.0;
  double y = 0.0;
  CellVerdict chart = CellVerdict::Unstable;
  StabilityVerdict simulation = StabilityVerdict::Inconclusive;
  bool agree = false;
  std::string note;
};

struct CrossValidateReport {
  std::vector<CrossValidateEntry> entries;
  int compared = 0;
  int agreed = 0;
  int inconclusive = 0;
  double agreement() const { return compared == 0 ? 0.0 : static_cast<double>(agreed) / compared; }
};

CrossValidateReport cross_validate(const Chart& chart, const CrossValidateOptions& opts = {});

/// Runs fn(k) for k in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pyragas
