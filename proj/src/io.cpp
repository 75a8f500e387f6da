#include "pyragas/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace pyragas::io {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

namespace {

void write_meta(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << '\n';
}

const char* flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride,
                          const Metadata& meta) {
  write_meta(os, meta);
  os << "t,re,im,abs,phase\n";
  if (stride == 0) stride = 1;
  auto row = [&](double t, Complex z) {
    os << format_double(t) << ',' << format_double(z.real()) << ',' << format_double(z.imag())
       << ',' << format_double(std::abs(z)) << ',' << format_double(std::arg(z)) << '\n';
  };
  const auto& segs = traj.segments();
  if (segs.empty()) return;
  row(traj.node_time(0), segs.front().z0);
  for (std::size_t k = stride; k <= segs.size(); k += stride) row(traj.node_time(k), segs[k - 1].z1);
}

void write_deviation_csv(std::ostream& os, const DeviationSeries& dev, const Metadata& meta) {
  write_meta(os, meta);
  os << "t,radial,phase\n";
  for (std::size_t k = 0; k < dev.size(); ++k) {
    os << format_double(dev.t[k]) << ',' << format_double(dev.radial[k]) << ','
       << format_double(dev.phase[k]) << '\n';
  }
}

Json to_json(const ModelParams& p) { return Json{{"lambda", p.lambda}, {"gamma", p.gamma}}; }

Json to_json(const RetardedControl& c) {
  return Json{{"K", c.K}, {"beta", c.beta}, {"tau", c.tau}};
}

Json to_json(const NeutralControl& n) {
  return Json{{"K1", n.K1}, {"beta1", n.beta1}, {"K2", n.K2}, {"beta2", n.beta2}, {"tau", n.tau}};
}

Json to_json(const SearchBox& b) {
  return Json{{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}};
}

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const Root& r) {
  return Json{{"re", r.mu.real()},
              {"im", r.mu.imag()},
              {"residual", r.residual},
              {"multiplicity", r.multiplicity}};
}

Json roots_json(const CharFunction& f, const SearchBox& box, const std::vector<Root>& roots,
                int count) {
  Json params = Json::object();
  params["model"] = to_json(f.model());
  if (f.retarded()) params["control"] = to_json(*f.retarded());
  if (f.neutral_control()) params["control"] = to_json(*f.neutral_control());
  Json list = Json::array();
  for (const Root& r : roots) list.push_back(to_json(r));
  return Json{{"schema", kSchemaVersion},
              {"variant", f.name()},
              {"params", params},
              {"box", to_json(box)},
              {"roots", list},
              {"count", count}};
}

Json hopf_json(const HopfReport& r) {
  auto vec = [](const Vector2c<double>& v) { return Json::array({to_json(v(0)), to_json(v(1))}); };
  return Json{{"schema", kSchemaVersion},
              {"approach", to_string(r.approach)},
              {"model", to_json(r.model)},
              {"control", to_json(r.control)},
              {"point",
               Json{{"lambda0", r.point.lambda0},
                    {"tau0", r.point.tau0},
                    {"omega0", r.point.omega0},
                    {"phi", r.point.phi}}},
              {"vectors", Json{{"p", vec(r.vectors.p)}, {"q", vec(r.vectors.q)}, {"alpha", to_json(r.vectors.alpha)}}},
              {"transversality", r.transversality},
              {"c", to_json(r.c)},
              {"mu2", r.mu2},
              {"direction", to_string(r.direction)}};
}

Json floquet_json(const FloquetReport& r) {
  return Json{{"schema", kSchemaVersion},
              {"exponents", Json::array({to_json(r.exponents[0]), to_json(r.exponents[1])})},
              {"multipliers", Json::array({to_json(r.multipliers[0]), to_json(r.multipliers[1])})},
              {"period", r.period},
              {"stable", r.stable},
              {"negative_period_warning", r.negative_period_warning}};
}

Json verdict_json(const OrbitVerdictReport& r) {
  const OrbitCertificate& c = r.certificate;
  Json roots = Json::array();
  for (const Root& root : c.roots) roots.push_back(to_json(root));
  Json cert{{"sign_value", c.sign_value},
            {"sign_negative", c.sign_negative},
            {"census_checked", c.census_checked},
            {"census_complete", c.census_complete},
            {"spectral_gap", c.spectral_gap},
            {"box", to_json(c.box)},
            {"roots", roots},
            {"large_lambda_warning", c.large_lambda_warning},
            {"note", c.note}};
  if (c.essential) {
    cert["essential"] = Json{{"radius", c.essential->radius}, {"stable_d", c.essential->stable_d}};
  }
  return Json{{"schema", kSchemaVersion}, {"verdict", to_string(r.verdict)}, {"certificate", cert}};
}

Json boundary_json(double beta1, double beta2, const std::vector<BoundarySample>& samples) {
  Json list = Json::array();
  for (const auto& s : samples) list.push_back(Json{{"omega", s.omega}, {"K1", s.K1}, {"K2", s.K2}});
  return Json{{"schema", kSchemaVersion}, {"beta1", beta1}, {"beta2", beta2}, {"samples", list}};
}

Json cross_validate_json(const CrossValidateReport& r) {
  Json list = Json::array();
  for (const auto& e : r.entries) {
    list.push_back(Json{{"i", e.i},
                        {"j", e.j},
                        {"x", e.x},
                        {"y", e.y},
                        {"chart", to_string(e.chart)},
                        {"simulation", to_string(e.simulation)},
                        {"agree", e.agree},
                        {"note", e.note}});
  }
  return Json{{"schema", kSchemaVersion},
              {"compared", r.compared},
              {"agreed", r.agreed},
              {"inconclusive", r.inconclusive},
              {"agreement", r.agreement()},
              {"entries", list}};
}

void write_chart_csv(std::ostream& os, const Chart& chart, const Metadata& meta) {
  write_meta(os, meta);
  os << "i,j,x,y,inside_boundary,stable_d,sign_condition,spectral_gap,sign_value,verdict\n";
  for (int j = 0; j < chart.grid.ny; ++j) {
    for (int i = 0; i < chart.grid.nx; ++i) {
      const RegionCell& c = chart.at(i, j);
      os << i << ',' << j << ',' << format_double(c.x) << ',' << format_double(c.y) << ','
         << flag(c.inside_boundary) << ',' << flag(c.stable_d) << ',' << flag(c.sign_condition)
         << ',' << flag(c.spectral_gap) << ',' << format_double(c.sign_value) << ','
         << to_string(c.verdict) << '\n';
    }
  }
}

std::string chart_svg(const Chart& chart) {
  constexpr double W = 640, H = 640, M = 60;
  const GridSpec& g = chart.grid;
  auto sx = [&](double x) { return M + (x - g.x_min) / (g.x_max - g.x_min) * (W - 2 * M); };
  auto sy = [&](double y) { return H - M - (y - g.y_min) / (g.y_max - g.y_min) * (H - 2 * M); };
  auto num = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
  };

  const bool neutral = chart.kind == ChartKind::Neutral;
  const char* xlabel = neutral ? "K₁" : "λ";
  const char* ylabel = neutral ? "K₂" : "K";

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<clipPath id=\"plot\"><rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M
     << "\" height=\"" << H - 2 * M << "\"/></clipPath>\n";

  if (g.nx >= 2 && g.ny >= 2) {
    const double cw = (W - 2 * M) / (g.nx - 1);
    const double chh = (H - 2 * M) / (g.ny - 1);
    os << "<g clip-path=\"url(#plot)\" fill=\"#9ecae1\" stroke=\"none\">\n";
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (chart.at(i, j).verdict != CellVerdict::Stable) continue;
        os << "<rect x=\"" << num(sx(g.x(i)) - cw / 2) << "\" y=\"" << num(sy(g.y(j)) - chh / 2)
           << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(chh + 0.5) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }

  if (!chart.boundary.empty()) {
    os << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : chart.boundary) {
      if (!std::isfinite(s.K1) || !std::isfinite(s.K2)) continue;
      os << num(sx(s.K1)) << ',' << num(sy(s.K2)) << ' ';
    }
    os << "\"/>\n";
  }

  // Axes with end labels.
  os << "<g stroke=\"black\" fill=\"none\">\n";
  os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\""
     << H - 2 * M << "\"/>\n</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel
     << "</text>\n";
  os << "<text x=\"20\" y=\"" << H / 2 << "\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  os << "<text x=\"" << M << "\" y=\"" << H - M + 18 << "\" text-anchor=\"middle\">"
     << num(g.x_min) << "</text>\n";
  os << "<text x=\"" << W - M << "\" y=\"" << H - M + 18 << "\" text-anchor=\"middle\">"
     << num(g.x_max) << "</text>\n";
  os << "<text x=\"" << M - 8 << "\" y=\"" << H - M << "\" text-anchor=\"end\">" << num(g.y_min)
     << "</text>\n";
  os << "<text x=\"" << M - 8 << "\" y=\"" << M + 5 << "\" text-anchor=\"end\">" << num(g.y_max)
     << "</text>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace pyragas::io
