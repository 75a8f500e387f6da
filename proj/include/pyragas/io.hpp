#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pyragas/charts.hpp"
#include "pyragas/hopf.hpp"
#include "pyragas/integrator.hpp"
#include "pyragas/spectrum.hpp"

namespace pyragas::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Key/value pairs echoed as "# key = value" lines at the top of CSV files.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);

/// t, re, im, abs, phase at every `stride`-th grid node.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1,
                          const Metadata& meta = {});
void write_deviation_csv(std::ostream& os, const DeviationSeries& dev, const Metadata& meta = {});

Json to_json(const ModelParams& p);
Json to_json(const RetardedControl& c);
Json to_json(const NeutralControl& n);
Json to_json(const SearchBox& b);
Json to_json(Complex z);
Json to_json(const Root& r);

Json roots_json(const CharFunction& f, const SearchBox& box, const std::vector<Root>& roots,
                int count);
Json hopf_json(const HopfReport& r);
Json floquet_json(const FloquetReport& r);
Json verdict_json(const OrbitVerdictReport& r);
Json boundary_json(double beta1, double beta2, const std::vector<BoundarySample>& samples);
Json cross_validate_json(const CrossValidateReport& r);

void write_chart_csv(std::ostream& os, const Chart& chart, const Metadata& meta = {});
/// Boundary curve plus shaded stable cells; no region is drawn for grids
/// with a single point along either axis.
std::string chart_svg(const Chart& chart);

}  // namespace pyragas::io
