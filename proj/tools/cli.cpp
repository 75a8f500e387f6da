#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "pyragas/charts.hpp"
#include "pyragas/hopf.hpp"
#include "pyragas/integrator.hpp"
#include "pyragas/io.hpp"
#include "pyragas/spectrum.hpp"
#include "pyragas/verify.hpp"

namespace pyragas::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  auto space = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), space));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), space).base(), s.end());
  return s;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  return v;
}

const CLI::Validator kAngle(
    [](std::string& s) -> std::string {
      try {
        s = io::format_double(parse_angle(s));
        return {};
      } catch (const std::exception&) {
        return "not an angle: " + s;
      }
    },
    "ANGLE", "angle");

// Every option of a command as (name, value) in declaration order.
io::Metadata echo(const CLI::App& app) {
  io::Metadata meta{{"command", app.get_name()}};
  for (const CLI::Option* o : app.get_options()) {
    std::string name = o->get_lnames().empty() ? o->get_name(true) : o->get_lnames().front();
    if (name == "help" || name == "config" || name.empty()) continue;
    std::string value;
    if (o->count() > 0) {
      for (const std::string& r : o->results()) value += (value.empty() ? "" : " ") + r;
    } else {
      value = o->get_default_str();
    }
    if (value.empty()) value = o->get_expected_min() == 0 ? "false" : "unset";
    meta.emplace_back(name, value);
  }
  return meta;
}

io::Json flags_json(const io::Metadata& meta) {
  io::Json j = io::Json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

std::filesystem::path output_path(const std::string& dir, const std::string& prefix,
                                  const std::string& suffix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return std::filesystem::path(dir) / (prefix + suffix);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

void write_json(const std::filesystem::path& path, const io::Json& j) {
  std::ofstream os = open_output(path);
  os << j.dump(2) << '\n';
}

// --------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  double lambda = 0.0;
  double gamma = 0.0;
  double K = 0.0;
  double beta = 0.0;
  double K2 = 0.0;
  double beta2 = 0.0;
  std::optional<double> tau;
  double periods = 30.0;
  int steps = static_cast<int>(kDefaultStepsPerDelay);
  double eps_r = 0.05;
  double eps_phi = 0.0;
  bool ode = false;
  double tube = 2.0;
  int stride = 10;
  ClassifyOptions classify;
  std::string out_dir = ".";
  std::string prefix = "simulate";
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  CLI::App* s = app.add_subcommand("simulate", "Integrate the controlled system from a perturbed orbit");
  s->add_option("--lambda", a.lambda, "Linear growth rate (must be negative)")->required();
  s->add_option("--gamma", a.gamma, "Amplitude-frequency coupling");
  s->add_option("--K", a.K, "Retarded gain");
  s->add_option("--beta", a.beta, "Retarded control phase")->transform(kAngle);
  s->add_option("--K2", a.K2, "Neutral gain (nonzero switches to the neutral system)");
  s->add_option("--beta2", a.beta2, "Neutral control phase")->transform(kAngle);
  s->add_option("--tau", a.tau, "Delay (default: the orbit period)");
  s->add_option("--periods", a.periods, "Horizon in orbit periods")->check(CLI::PositiveNumber);
  s->add_option("--steps", a.steps, "Steps per delay")->check(CLI::Range(100, 1000000));
  s->add_option("--eps-r", a.eps_r, "Radial perturbation of the initial orbit");
  s->add_option("--eps-phi", a.eps_phi, "Phase perturbation of the initial orbit");
  s->add_flag("--ode", a.ode, "Integrate the uncontrolled ODE instead");
  s->add_option("--tube", a.tube, "Escape radius in orbit radii")->check(CLI::PositiveNumber);
  s->add_option("--stride", a.stride, "Write every n-th step to the trajectory CSV")
      ->check(CLI::PositiveNumber);
  s->add_option("--window", a.classify.window_fraction, "Classification window fraction");
  s->add_option("--converge-ratio", a.classify.converge_ratio, "Last/first ratio for Converging");
  s->add_option("--diverge-ratio", a.classify.diverge_ratio, "Last/first ratio for Diverging");
  s->add_option("--out-dir", a.out_dir, "Output directory");
  s->add_option("--prefix", a.prefix, "Output file prefix");
}

int cmd_simulate(const CLI::App& sub, const SimulateArgs& a, std::ostream& out) {
  const io::Metadata meta = echo(sub);
  const ModelParams p{a.lambda, a.gamma};
  const PeriodicOrbit orbit = periodic_orbit(p);
  const double tau = a.tau.value_or(orbit.period);
  const double h = tau / a.steps;
  const double t_end = a.periods * orbit.period;
  const HistoryFunction hist = perturbed_orbit_history(orbit, a.eps_r, a.eps_phi);
  const IntegrationOptions opts{a.tube * orbit.radius};

  std::string system;
  Trajectory traj;
  if (a.ode) {
    system = "ode";
    traj = integrate_ode(p, hist(0.0).value, t_end, h, opts);
  } else if (a.K2 != 0.0) {
    system = "ndde";
    traj = integrate_ndde(p, NeutralControl{a.K, a.beta, a.K2, a.beta2, tau}, hist, t_end, h, opts);
  } else {
    system = "dde";
    traj = integrate_dde(p, RetardedControl{a.K, a.beta, tau}, hist, t_end, h, opts);
  }
  const DeviationSeries dev = deviation(traj, orbit, orbit.period / 100.0);
  const StabilityVerdict verdict = classify(dev, t_end, a.classify);

  const auto traj_path = output_path(a.out_dir, a.prefix, "_trajectory.csv");
  const auto dev_path = output_path(a.out_dir, a.prefix, "_deviation.csv");
  const auto verdict_path = output_path(a.out_dir, a.prefix, "_verdict.json");
  {
    std::ofstream os = open_output(traj_path);
    io::write_trajectory_csv(os, traj, static_cast<std::size_t>(a.stride), meta);
  }
  {
    std::ofstream os = open_output(dev_path);
    io::write_deviation_csv(os, dev, meta);
  }
  write_json(verdict_path,
             io::Json{{"schema", io::kSchemaVersion},
                      {"flags", flags_json(meta)},
                      {"system", system},
                      {"orbit", {{"radius", orbit.radius}, {"omega", orbit.omega}, {"period", orbit.period}}},
                      {"step", h},
                      {"t_end", traj.t_end()},
                      {"escaped", traj.escaped()},
                      {"verdict", to_string(verdict)}});

  out << "system " << system << ", " << traj.size() << " steps"
      << (traj.escaped() ? " (escaped)" : "") << '\n';
  out << "verdict " << to_string(verdict) << '\n';
  out << "wrote " << traj_path.string() << ", " << dev_path.string() << ", "
      << verdict_path.string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
  std::string variant = "controlled";
  double lambda = 0.0;
  double gamma = 0.0;
  double K = 0.0;
  double beta = 0.0;
  double K2 = 0.0;
  double beta2 = 0.0;
  double tau = kTwoPi;
  SearchBox box;
  int grid = 16;
  double gap = -1e-4;
  std::string out_dir = ".";
  std::string prefix = "spectrum";
};

void add_spectrum(CLI::App& app, SpectrumArgs& a) {
  CLI::App* s = app.add_subcommand("spectrum", "Count and locate characteristic roots in a box");
  s->add_option("--variant", a.variant, "Characteristic function")
      ->check(CLI::IsMember({"uncontrolled", "controlled", "variational", "neutral"}));
  s->add_option("--lambda", a.lambda, "Linear growth rate");
  s->add_option("--gamma", a.gamma, "Amplitude-frequency coupling");
  s->add_option("--K,--K1", a.K, "Retarded gain");
  s->add_option("--beta,--beta1", a.beta, "Retarded control phase")->transform(kAngle);
  s->add_option("--K2", a.K2, "Neutral gain");
  s->add_option("--beta2", a.beta2, "Neutral control phase")->transform(kAngle);
  s->add_option("--tau", a.tau, "Delay")->check(CLI::PositiveNumber);
  s->add_option("--re-min", a.box.re_min, "Box left edge");
  s->add_option("--re-max", a.box.re_max, "Box right edge");
  s->add_option("--im-min", a.box.im_min, "Box bottom edge");
  s->add_option("--im-max", a.box.im_max, "Box top edge");
  s->add_option("--grid", a.grid, "Newton seeds per box side")->check(CLI::Range(2, 1000));
  s->add_option("--gap", a.gap, "Abscissa for the spectral gap check (negative)");
  s->add_option("--out-dir", a.out_dir, "Output directory");
  s->add_option("--prefix", a.prefix, "Output file prefix");
}

int cmd_spectrum(const CLI::App& sub, const SpectrumArgs& a, std::ostream& out) {
  const io::Metadata meta = echo(sub);
  validate(a.box);
  const ModelParams p{a.lambda, a.gamma};
  const RetardedControl c{a.K, a.beta, a.tau};
  std::optional<CharFunction> f;
  std::vector<Complex> excluded;
  if (a.variant == "uncontrolled") {
    f = CharFunction::uncontrolled(p);
  } else if (a.variant == "controlled") {
    f = CharFunction::controlled(p, c);
    excluded = {Complex{0.0, 1.0}};
  } else if (a.variant == "variational") {
    f = CharFunction::variational(p, c);
    excluded = {Complex{}};
  } else {
    f = CharFunction::neutral(p, NeutralControl{a.K, a.beta, a.K2, a.beta2, a.tau});
    excluded = {Complex{0.0, 1.0}};
  }

  FindOptions find;
  find.grid_n = a.grid;
  const std::vector<Root> roots = find_roots(*f, a.box, find);
  const int count = count_roots(*f, a.box);

  io::Json j = io::roots_json(*f, a.box, roots, count);
  j["flags"] = flags_json(meta);
  std::string gap_text = "not checked (box lies left of the gap abscissa)";
  if (a.box.re_max > a.gap) {
    const SpectralGapReport gap = spectral_gap_report(*f, a.box, excluded, a.gap, find);
    io::Json offending = io::Json::array();
    for (const Root& r : gap.offending) offending.push_back(io::to_json(r));
    io::Json excl = io::Json::array();
    for (Complex z : excluded) excl.push_back(io::to_json(z));
    j["gap"] = io::Json{{"abscissa", a.gap}, {"excluded", excl}, {"holds", gap.holds}, {"offending", offending}};
    gap_text = gap.holds ? "holds" : "fails";
  }

  const auto path = output_path(a.out_dir, a.prefix, ".json");
  write_json(path, j);
  out << f->name() << ": " << count << " root(s) in box\n";
  for (const Root& r : roots) {
    out << "  " << io::format_double(r.mu.real()) << (r.mu.imag() < 0 ? " - " : " + ")
        << io::format_double(std::abs(r.mu.imag())) << "i"
        << (r.multiplicity > 1 ? "  (multiplicity " + std::to_string(r.multiplicity) + ")" : "")
        << '\n';
  }
  out << "spectral gap at Re = " << a.gap << ": " << gap_text << '\n';
  out << "wrote " << path.string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------------
// hopf

struct HopfArgs {
  std::string approach = "left";
  double gamma = 0.0;
  double K = 0.0;
  double beta = 0.0;
  double phi = kTwoPi;
  std::string out_dir = ".";
  std::string prefix = "hopf";
};

void add_hopf(CLI::App& app, HopfArgs& a) {
  CLI::App* s = app.add_subcommand("hopf", "Hopf normal-form coefficient and bifurcation direction");
  s->add_option("--approach", a.approach, "Path through the bifurcation point")
      ->check(CLI::IsMember({"left", "right", "lambda-axis"}));
  s->add_option("--gamma", a.gamma, "Amplitude-frequency coupling");
  s->add_option("--K", a.K, "Gain");
  s->add_option("--beta", a.beta, "Control phase")->transform(kAngle);
  s->add_option("--phi", a.phi, "Hopf curve parameter (lambda-axis only)");
  s->add_option("--out-dir", a.out_dir, "Output directory");
  s->add_option("--prefix", a.prefix, "Output file prefix");
}

int cmd_hopf(const CLI::App& sub, const HopfArgs& a, std::ostream& out) {
  const io::Metadata meta = echo(sub);
  validate(ModelParams{0.0, a.gamma});
  validate(RetardedControl{a.K, a.beta, kTwoPi});
  Approach approach = Approach::PyragasLeft;
  HopfPoint point = pyragas_hopf_point();
  if (a.approach == "right") approach = Approach::PyragasRight;
  if (a.approach == "lambda-axis") {
    approach = Approach::LambdaAxis;
    const ParameterPoint pp = hopf_curve_point(a.phi, a.K, a.beta);
    if (!(pp.tau > 0)) throw DomainError("the Hopf curve has tau <= 0 at this phi");
    point = HopfPoint{pp.lambda, pp.tau, a.phi / pp.tau, a.phi};
  }
  const RetardedControl c{a.K, a.beta, point.tau0};
  const HopfReport r = hopf_report(ModelParams{point.lambda0, a.gamma}, c, point, approach);

  io::Json j = io::hopf_json(r);
  j["flags"] = flags_json(meta);
  if (approach == Approach::LambdaAxis) {
    j["mu2_closed_form"] = mu2_lambda_axis_closed_form(a.K, a.beta, a.gamma, point.tau0, a.phi);
    const HopfCurveResult cond = hopf_curve_conditions(c, a.phi);
    j["conditions"] = io::Json{{"occurs", cond.occurs},
                               {"simple_factor_nonzero", cond.simple_factor_nonzero},
                               {"derivative_positive", cond.derivative_positive},
                               {"multiplicity", cond.multiplicity},
                               {"non_resonant", cond.non_resonant}};
  } else {
    j["mu2_closed_form"] = approach == Approach::PyragasLeft ? -4.0 : 4.0;
  }

  const auto path = output_path(a.out_dir, a.prefix, ".json");
  write_json(path, j);
  out << "approach " << to_string(approach) << " at lambda0 = " << point.lambda0
      << ", tau0 = " << point.tau0 << ", omega0 = " << point.omega0 << '\n';
  out << "c = " << io::format_double(r.c.real()) << (r.c.imag() < 0 ? " - " : " + ")
      << io::format_double(std::abs(r.c.imag())) << "i\n";
  out << "mu2 = " << io::format_double(r.mu2) << " (" << to_string(r.direction) << ")\n";
  out << "wrote " << path.string() << '\n';
  return kOk;
}

// --------------------------------------------------------------------------
// chart

struct ChartArgs {
  std::string kind = "neutral";
  double gamma = -10.0;
  double beta1 = kPi / 4;
  std::optional<double> beta2;
  std::optional<double> x_min, x_max, y_min, y_max;
  int nx = 200;
  int ny = 200;
  std::string mode = "auto";
  int omegas = 400;
  double gap = -1e-4;
  unsigned jobs = 0;
  int cross_validate = 0;
  CrossValidateOptions cv;
  std::string out_dir = ".";
  std::string prefix = "chart";
};

void add_chart(CLI::App& app, ChartArgs& a) {
  CLI::App* s = app.add_subcommand("chart", "Stability chart in (K1, K2) or (lambda, K)");
  s->add_option("kind", a.kind, "neutral or retarded")
      ->check(CLI::IsMember({"neutral", "retarded"}));
  s->add_option("--gamma", a.gamma, "Amplitude-frequency coupling");
  s->add_option("--beta1,--beta", a.beta1, "Retarded control phase")->transform(kAngle);
  s->add_option("--beta2", a.beta2, "Neutral control phase (default: beta1)")->transform(kAngle);
  s->add_option("--x-min", a.x_min, "Left edge (K1 or lambda)");
  s->add_option("--x-max", a.x_max, "Right edge");
  s->add_option("--y-min", a.y_min, "Bottom edge (K2 or K)");
  s->add_option("--y-max", a.y_max, "Top edge");
  s->add_option("--nx", a.nx, "Grid points along x")->check(CLI::Range(1, 100000));
  s->add_option("--ny", a.ny, "Grid points along y")->check(CLI::Range(1, 100000));
  s->add_option("--mode", a.mode, "Inside test for neutral charts")
      ->check(CLI::IsMember({"auto", "polygon", "census"}));
  s->add_option("--omegas", a.omegas, "Boundary samples in (0, 2)")->check(CLI::Range(3, 1000000));
  s->add_option("--gap", a.gap, "Census abscissa (negative)");
  s->add_option("--jobs", a.jobs, "Worker threads (0: all cores)");
  s->add_option("--cross-validate", a.cross_validate, "Simulate an n x n sample of cells (0: off)")
      ->check(CLI::Range(0, 1000));
  s->add_option("--cv-periods", a.cv.periods, "Simulation horizon in orbit periods")
      ->check(CLI::PositiveNumber);
  s->add_option("--cv-lambda", a.cv.lambda, "Lambda used to simulate neutral cells");
  s->add_option("--cv-eps-r", a.cv.eps_r, "Radial perturbation for the simulations");
  s->add_option("--out-dir", a.out_dir, "Output directory");
  s->add_option("--prefix", a.prefix, "Output file prefix");
}

int cmd_chart(const CLI::App& sub, const ChartArgs& a, std::ostream& out) {
  const io::Metadata meta = echo(sub);
  const bool neutral = a.kind == "neutral";
  GridSpec g;
  g.x_min = a.x_min.value_or(neutral ? -0.3 : -0.1);
  g.x_max = a.x_max.value_or(neutral ? 0.8 : -0.001);
  g.y_min = a.y_min.value_or(neutral ? -0.8 : -0.3);
  g.y_max = a.y_max.value_or(neutral ? 0.45 : 0.8);
  g.nx = a.nx;
  g.ny = a.ny;

  ChartOptions opts;
  opts.mode = a.mode == "polygon" ? InsideMode::Polygon
              : a.mode == "census" ? InsideMode::Census
                                   : InsideMode::Auto;
  opts.omegas = a.omegas;
  opts.gap = a.gap;
  opts.jobs = a.jobs;
  const Chart chart = neutral ? neutral_chart(a.gamma, a.beta1, a.beta2.value_or(a.beta1), g, opts)
                              : retarded_chart(a.gamma, a.beta1, g, opts);

  const auto csv_path = output_path(a.out_dir, a.prefix, "_cells.csv");
  const auto svg_path = output_path(a.out_dir, a.prefix, ".svg");
  {
    std::ofstream os = open_output(csv_path);
    io::write_chart_csv(os, chart, meta);
  }
  {
    std::ofstream os = open_output(svg_path);
    os << io::chart_svg(chart);
  }
  out << a.kind << " chart " << g.nx << "x" << g.ny << ", inside test "
      << (chart.mode_used == InsideMode::Polygon ? "polygon" : "census") << ", "
      << chart.stable_count() << " stable cell(s)\n";
  out << "wrote " << csv_path.string() << ", " << svg_path.string() << '\n';

  if (neutral) {
    const auto path = output_path(a.out_dir, a.prefix, "_boundary.json");
    io::Json j = io::boundary_json(chart.beta1, chart.beta2, chart.boundary);
    j["flags"] = flags_json(meta);
    write_json(path, j);
    out << "wrote " << path.string() << '\n';
  }
  if (a.cross_validate > 0) {
    CrossValidateOptions cv = a.cv;
    cv.samples_x = cv.samples_y = a.cross_validate;
    cv.jobs = a.jobs;
    const CrossValidateReport rep = cross_validate(chart, cv);
    const auto path = output_path(a.out_dir, a.prefix, "_cross_validate.json");
    io::Json j = io::cross_validate_json(rep);
    j["flags"] = flags_json(meta);
    write_json(path, j);
    out << "cross-validation: " << rep.agreed << "/" << rep.compared << " agree ("
        << rep.inconclusive << " inconclusive)\n";
    out << "wrote " << path.string() << '\n';
  }
  return kOk;
}

// --------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::uint64_t seed = verify::kDefaultSeed;
  unsigned jobs = 0;
  std::string filter;
};

void add_verify(CLI::App& app, VerifyArgs& a) {
  CLI::App* s = app.add_subcommand("verify", "Run the property suite");
  a.seed = verify::seed_from_environment();
  s->add_option("--seed", a.seed, "Base RNG seed (default: PYRAGAS_LAB_SEED or built-in)");
  s->add_option("--jobs", a.jobs, "Worker threads (0: all cores)");
  s->add_option("--filter", a.filter, "Only properties whose name contains this text");
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto& all = verify::properties();
  const auto results = verify::run_all(a.seed, a.jobs, a.filter);
  int failed = 0;
  for (const auto& r : results) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& p) { return p.name == r.name; });
    const auto index = static_cast<std::uint64_t>(it - all.begin());
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (seed " << a.seed + index << "): " << r.detail
        << '\n';
    if (!r.passed) ++failed;
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
      << " properties passed (base seed " << a.seed << ")\n";
  return failed == 0 ? kOk : kFailure;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty angle");
  const std::size_t at = s.find("pi");
  if (at == std::string::npos) return parse_number(s);

  std::string coeff = trim(s.substr(0, at));
  std::string rest = trim(s.substr(at + 2));
  double factor = 1.0;
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  if (coeff == "-") {
    factor = -1.0;
  } else if (coeff == "+") {
    factor = 1.0;
  } else if (!coeff.empty()) {
    factor = parse_number(coeff);
  }
  double denom = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("cannot parse angle '" + text + "'");
    denom = parse_number(trim(rest.substr(1)));
    if (denom == 0.0) throw std::invalid_argument("zero denominator in '" + text + "'");
  }
  return factor * kPi / denom;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis of delayed feedback control for the Stuart-Landau oscillator",
               "pyragas-lab"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML configuration file (one [section] per command)");

  SimulateArgs simulate;
  SpectrumArgs spectrum;
  HopfArgs hopf;
  ChartArgs chart;
  VerifyArgs verify_args;
  add_simulate(app, simulate);
  add_spectrum(app, spectrum);
  add_hopf(app, hopf);
  add_chart(app, chart);
  add_verify(app, verify_args);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (name == "simulate") return cmd_simulate(*sub, simulate, out);
    if (name == "spectrum") return cmd_spectrum(*sub, spectrum, out);
    if (name == "hopf") return cmd_hopf(*sub, hopf, out);
    if (name == "chart") return cmd_chart(*sub, chart, out);
    return cmd_verify(verify_args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace pyragas::cli
