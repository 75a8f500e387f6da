#include "pyragas/charts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "pyragas/hopf.hpp"

namespace pyragas {

namespace {

constexpr double kPi = pi_v<double>;
constexpr double kTwoPi = two_pi_v<double>;

}  // namespace

// ---------------------------------------------------------------------------
// Grid and cells

double GridSpec::x(int i) const {
  if (nx == 1) return 0.5 * (x_min + x_max);
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx - 1);
}

double GridSpec::y(int j) const {
  if (ny == 1) return 0.5 * (y_min + y_max);
  return y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(ny - 1);
}

void validate(const GridSpec& g) {
  if (g.nx < 1 || g.ny < 1) throw DomainError("grid needs at least one point per axis");
  const bool finite = std::isfinite(g.x_min) && std::isfinite(g.x_max) &&
                      std::isfinite(g.y_min) && std::isfinite(g.y_max);
  if (!finite || !(g.x_max > g.x_min) || !(g.y_max > g.y_min)) {
    throw DomainError("grid ranges must be nonempty");
  }
}

const char* to_string(CellVerdict v) { return v == CellVerdict::Stable ? "stable" : "unstable"; }

CellVerdict cell_verdict(const RegionCell& c) {
  return c.inside_boundary && c.stable_d && c.sign_condition && c.spectral_gap
             ? CellVerdict::Stable
             : CellVerdict::Unstable;
}

std::size_t Chart::stable_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const RegionCell& c) {
    return c.verdict == CellVerdict::Stable;
  }));
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  if (jobs <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Necessary condition

NecessaryCondition necessary_condition(const ModelParams& p, const RetardedControl& c) {
  validate(p);
  const double denom = 1.0 - p.gamma * p.lambda;
  if (denom == 0.0) throw DomainError("1 - gamma*lambda vanishes");
  const double tau = kTwoPi / denom;
  NecessaryCondition r;
  r.value = 1.0 + tau * c.K * (std::cos(c.beta) + p.gamma * std::sin(c.beta));
  r.satisfied = r.value < 0;
  return r;
}

// ---------------------------------------------------------------------------
// Neutral boundary

namespace {

/// (1 - omega) / sin(pi omega), continued through omega = 1.
double damped_cosecant(double omega) {
  const double eps = 1.0 - omega;
  if (std::abs(eps) < 1e-4) {
    const double x = kPi * eps;
    return (1.0 + x * x / 6.0 + 7.0 * x * x * x * x / 360.0) / kPi;
  }
  return eps / std::sin(kPi * omega);
}

}  // namespace

std::vector<BoundarySample> ndde_boundary(double beta1, double beta2,
                                          const std::vector<double>& omegas) {
  const double det_phase = std::cos(beta1 - beta2);
  if (std::abs(det_phase) < 1e-12) {
    throw DomainError("boundary undefined for cos(beta1 - beta2) = 0");
  }
  std::vector<BoundarySample> out;
  out.reserve(omegas.size());
  for (const double omega : omegas) {
    if (!(omega > 0.0 && omega < 2.0)) throw DomainError("boundary frequency outside (0, 2)");
    // K1 e^{i beta1} + i omega K2 e^{i beta2} = w solved for real gains.
    const Complex w = 0.5 * damped_cosecant(omega) * unit_phase(kPi * omega);
    const double det = omega * det_phase;
    BoundarySample s;
    s.omega = omega;
    s.K1 = omega * std::real(w * unit_phase(-beta2)) / det;
    s.K2 = std::imag(w * unit_phase(-beta1)) / det;
    out.push_back(s);
  }
  return out;
}

std::vector<BoundarySample> ndde_boundary(double beta, const std::vector<double>& omegas) {
  return ndde_boundary(beta, beta, omegas);
}

std::vector<double> default_omegas(int n) {
  if (n < 2) throw DomainError("need at least two boundary frequencies");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n; ++k) out.push_back(2.0 * k / (n + 1));
  if (std::none_of(out.begin(), out.end(), [](double w) { return w == 1.0; })) {
    out.push_back(1.0);
    std::sort(out.begin(), out.end());
  }
  return out;
}

namespace {

std::optional<Point2> segment_intersection(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double rx = b.x - a.x, ry = b.y - a.y;
  const double sx = d.x - c.x, sy = d.y - c.y;
  const double den = rx * sy - ry * sx;
  if (den == 0.0) return std::nullopt;
  const double qx = c.x - a.x, qy = c.y - a.y;
  const double t = (qx * sy - qy * sx) / den;
  const double u = (qx * ry - qy * rx) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return Point2{a.x + t * rx, a.y + t * ry};
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point2& p = poly[k];
    const Point2& q = poly[(k + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

}  // namespace

bool point_in_polygon(const std::vector<Point2>& polygon, Point2 p) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
    const Point2& u = polygon[a];
    const Point2& v = polygon[b];
    if ((u.y > p.y) != (v.y > p.y)) {
      const double x = u.x + (p.y - u.y) * (v.x - u.x) / (v.y - u.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

std::vector<Point2> boundary_loop(const std::vector<BoundarySample>& samples) {
  std::vector<Point2> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) pts.push_back({s.K1, s.K2});

  std::vector<Point2> best;
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < pts.size(); ++j) {
      const auto hit = segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]);
      if (!hit) continue;
      std::vector<Point2> loop;
      loop.push_back(*hit);
      loop.insert(loop.end(), pts.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                  pts.begin() + static_cast<std::ptrdiff_t>(j) + 1);
      if (loop.size() < 3 || !point_in_polygon(loop, {0.0, 0.0})) continue;
      const double area = polygon_area(loop);
      if (area < best_area) {
        best_area = area;
        best = std::move(loop);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Charts

CensusCount census_count(const CharFunction& f, double gap, const CountOptions& opts) {
  const CensusBox cb = census_box(f, gap);
  return {count_roots(f, cb.box, opts), cb.complete};
}

namespace {

RegionCell neutral_cell(double gamma, double beta1, double beta2, double K1, double K2,
                        bool use_polygon, const std::vector<Point2>& loop,
                        const ChartOptions& opts) {
  RegionCell cell;
  cell.x = K1;
  cell.y = K2;
  const NeutralControl n{K1, beta1, K2, beta2, kTwoPi};
  cell.sign_value = sign_expression(n, gamma);
  cell.sign_condition = cell.sign_value < 0;
  bool well_posed = true;
  try {
    cell.stable_d = essential_spectrum(n).stable_d;
  } catch (const DenominatorZero&) {
    cell.stable_d = false;
    well_posed = false;
  }
  if (use_polygon) {
    cell.inside_boundary = point_in_polygon(loop, {K1, K2});
  } else if (well_posed && cell.stable_d) {
    try {
      const CharFunction f = CharFunction::neutral(ModelParams{0.0, gamma}, n);
      cell.inside_boundary = census_count(f, opts.gap, opts.count).count == 1;
    } catch (const Error&) {
      cell.inside_boundary = false;
    }
  }
  cell.spectral_gap = cell.inside_boundary && cell.stable_d;
  cell.verdict = cell_verdict(cell);
  return cell;
}

}  // namespace

Chart neutral_chart(double gamma, double beta1, double beta2, const GridSpec& grid,
                    const ChartOptions& opts) {
  validate(grid);
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  validate_phase(beta1, "beta1");
  validate_phase(beta2, "beta2");

  Chart chart;
  chart.kind = ChartKind::Neutral;
  chart.grid = grid;
  chart.gamma = gamma;
  chart.beta1 = beta1;
  chart.beta2 = beta2;
  if (std::abs(std::cos(beta1 - beta2)) >= 1e-12) {
    chart.boundary = ndde_boundary(beta1, beta2, default_omegas(opts.omegas));
  }

  bool polygon = false;
  switch (opts.mode) {
    case InsideMode::Census:
      break;
    case InsideMode::Polygon:
      if (beta1 != beta2) throw DomainError("polygon mode needs beta1 = beta2");
      polygon = true;
      break;
    case InsideMode::Auto:
      polygon = beta1 == beta2;
      break;
  }
  if (polygon) {
    chart.loop = boundary_loop(chart.boundary);
    if (chart.loop.empty()) {
      if (opts.mode == InsideMode::Polygon) throw DomainError("boundary curve has no closed loop");
      polygon = false;
    }
  }
  chart.mode_used = polygon ? InsideMode::Polygon : InsideMode::Census;

  chart.cells.resize(grid.size());
  parallel_for(grid.size(), opts.jobs, [&](std::size_t k) {
    const int i = static_cast<int>(k % static_cast<std::size_t>(grid.nx));
    const int j = static_cast<int>(k / static_cast<std::size_t>(grid.nx));
    chart.cells[k] =
        neutral_cell(gamma, beta1, beta2, grid.x(i), grid.y(j), polygon, chart.loop, opts);
  });
  return chart;
}

Chart retarded_chart(double gamma, double beta, const GridSpec& grid, const ChartOptions& opts) {
  validate(grid);
  if (!std::isfinite(gamma)) throw DomainError("gamma must be finite");
  validate_phase(beta, "beta");
  if (!(grid.x_max < 0.0)) throw DomainError("retarded charts need lambda < 0 across the grid");

  Chart chart;
  chart.kind = ChartKind::Retarded;
  chart.grid = grid;
  chart.gamma = gamma;
  chart.beta1 = beta;
  chart.beta2 = beta;
  chart.mode_used = InsideMode::Census;

  // The census at lambda = 0 depends only on K, so one count per row.
  std::vector<char> census(static_cast<std::size_t>(grid.ny), 0);
  parallel_for(census.size(), opts.jobs, [&](std::size_t j) {
    const double K = grid.y(static_cast<int>(j));
    const CharFunction f = CharFunction::controlled(ModelParams{0.0, gamma}, {K, beta, kTwoPi});
    try {
      census[j] = census_count(f, opts.gap, opts.count).count == 1 ? 1 : 0;
    } catch (const Error&) {
      census[j] = 0;
    }
  });

  chart.cells.resize(grid.size());
  for (int j = 0; j < grid.ny; ++j) {
    const double K = grid.y(j);
    for (int i = 0; i < grid.nx; ++i) {
      RegionCell cell;
      cell.x = grid.x(i);
      cell.y = K;
      cell.sign_value = sign_expression(RetardedControl{K, beta, kTwoPi}, gamma);
      cell.sign_condition = cell.sign_value < 0;
      cell.stable_d = true;
      cell.inside_boundary = census[static_cast<std::size_t>(j)] != 0;
      cell.spectral_gap = cell.inside_boundary;
      cell.verdict = cell_verdict(cell);
      chart.cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(grid.nx) +
                  static_cast<std::size_t>(i)] = cell;
    }
  }
  return chart;
}

// ---------------------------------------------------------------------------
// Cross validation

namespace {

std::vector<int> sample_indices(int n, int samples) {
  std::vector<int> out;
  if (n <= 0) return out;
  samples = std::min(samples, n);
  for (int s = 0; s < samples; ++s) {
    const int idx = samples == 1 ? n / 2
                                 : static_cast<int>(std::lround(static_cast<double>(s) * (n - 1) /
                                                                (samples - 1)));
    if (out.empty() || out.back() != idx) out.push_back(idx);
  }
  return out;
}

StabilityVerdict simulate_cell(const Chart& chart, const RegionCell& cell,
                               const CrossValidateOptions& opts, std::string& note) {
  const double lambda = chart.kind == ChartKind::Neutral ? opts.lambda : cell.x;
  const ModelParams p{lambda, chart.gamma};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const double h = orbit.period / opts.steps_per_period;
  const double horizon = opts.periods * orbit.period;
  const HistoryFunction hist = perturbed_orbit_history(orbit, opts.eps_r, opts.eps_phi);
  IntegrationOptions io;
  io.escape_radius = opts.tube * orbit.radius;
  try {
    Trajectory traj;
    if (chart.kind == ChartKind::Neutral) {
      const NeutralControl n{cell.x, chart.beta1, cell.y, chart.beta2, orbit.period};
      traj = integrate_ndde(p, n, hist, horizon, h, io);
    } else {
      const RetardedControl c{cell.y, chart.beta1, orbit.period};
      traj = integrate_dde(p, c, hist, horizon, h, io);
    }
    const DeviationSeries dev = deviation(traj, orbit, orbit.period / 20.0);
    return classify(dev, horizon, opts.classify);
  } catch (const UndefinedPhase&) {
    note = "trajectory collapsed onto the origin";
    return StabilityVerdict::Diverging;
  } catch (const Error& e) {
    note = e.what();
    return StabilityVerdict::Inconclusive;
  }
}

}  // namespace

CrossValidateReport cross_validate(const Chart& chart, const CrossValidateOptions& opts) {
  CrossValidateReport report;
  const std::vector<int> is = sample_indices(chart.grid.nx, opts.samples_x);
  const std::vector<int> js = sample_indices(chart.grid.ny, opts.samples_y);
  for (int j : js) {
    for (int i : is) {
      CrossValidateEntry e;
      e.i = i;
      e.j = j;
      e.x = chart.at(i, j).x;
      e.y = chart.at(i, j).y;
      e.chart = chart.at(i, j).verdict;
      report.entries.push_back(e);
    }
  }
  parallel_for(report.entries.size(), opts.jobs, [&](std::size_t k) {
    CrossValidateEntry& e = report.entries[k];
    e.simulation = simulate_cell(chart, chart.at(e.i, e.j), opts, e.note);
  });
  for (CrossValidateEntry& e : report.entries) {
    if (e.simulation == StabilityVerdict::Inconclusive) {
      ++report.inconclusive;
      continue;
    }
    e.agree = (e.chart == CellVerdict::Stable) == (e.simulation == StabilityVerdict::Converging);
    ++report.compared;
    if (e.agree) ++report.agreed;
  }
  return report;
}

}  // namespace pyragas
