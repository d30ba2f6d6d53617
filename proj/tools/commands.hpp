#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "altlin/numcore.hpp"
#include "altlin/report.hpp"
#include "json.hpp"

namespace altlin::cli {

using Json = nlohmann::ordered_json;

/// Every knob any subcommand reads. Each subcommand binds its own copy so
/// defaults can differ per command.
struct RunConfig {
  std::string command;
  std::string name;
  std::string gauge = "symmetric";
  int n = 1;
  double lambda = 0.1;
  std::optional<double> chart_lambda;  // moyal-sweep: brackets in the ho_K chart
  double B = 1.0;
  double k = 1.0;
  double hbar = 1.0;
  int N = 64;
  double L = 16.0;
  int samples = 1000;
  std::uint64_t seed = 7;
  double tol = 1e-8;
  int steps = 10000;
  int rows = 101;
  std::vector<double> state{1.0, 0.0, 0.0, 1.0};
  int grid = 5;
  double extent = 1.0;
  double arc = 2.0;
  std::string f = "q3";
  std::string g = "p3";
  std::vector<double> at{0.7, -1.3};
  double hbar_min = 1e-3;
  double hbar_max = 1e-1;
  int points = 9;
  int order = 3;
  std::string output;  // empty: stdout
  std::string csv;     // secondary CSV path (magnetic-demo)
  std::string format = "json";
  std::string config;
};

/// Result of one command: the report, its JSON form and any CSV payload.
struct Outcome {
  Report report;
  Json json;
  std::string csv;
  int exit_code() const { return report.pass() ? 0 : 1; }
};

Json report_json(const std::string& command, const Json& params, const Report& r);

Outcome cmd_structure_check(const RunConfig& c);
Outcome cmd_liouville(const RunConfig& c);
Outcome cmd_darboux(const RunConfig& c);
Outcome cmd_magnetic_demo(const RunConfig& c);
Outcome cmd_figure1(const RunConfig& c);
Outcome cmd_quantize_demo(const RunConfig& c);
Outcome cmd_moyal_sweep(const RunConfig& c);

struct Figure1Curve {
  int id = 0;
  int field = 0;  // 0: d/dQ, 1: d/dP
  numcore::Point seed;
  std::vector<std::array<double, 3>> rows;  // (t, q, p), t = signed arc length
};
/// Integral curves of the unit-speed d/dQ and d/dP fields of ho_K through a
/// grid x grid lattice of seeds in [-extent, extent]^2, RK4 with `steps`
/// steps over total arc length `arc`. Curve id = 2 * seed index + field.
std::vector<Figure1Curve> figure1_curves(double lambda, int grid, double extent, double arc, int steps);
/// Largest three-point curvature over all curves.
double figure1_max_curvature(const std::vector<Figure1Curve>& curves);
std::string figure1_csv(const std::vector<Figure1Curve>& curves);
/// Transverse model coordinate constant along each curve; at lambda = 0 the
/// curves are coordinate lines; curves through the origin stay straight.
Report figure1_report(const std::vector<Figure1Curve>& curves, double lambda, double tol);

/// Full command line: parses, runs, writes outputs. Exit codes 0 pass,
/// 1 check failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace altlin::cli
