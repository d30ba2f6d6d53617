#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <numbers>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "altlin/dynamics.hpp"
#include "altlin/errors.hpp"
#include "altlin/lagrangian.hpp"
#include "altlin/linstruct.hpp"
#include "altlin/moyal.hpp"
#include "altlin/quantize.hpp"

namespace altlin::cli {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

Json residual_value(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

linstruct::CatalogParams catalog_params(const RunConfig& c) {
  return {c.n, c.lambda, c.B, c.gauge};
}

Json structure_params(const RunConfig& c) {
  Json p;
  p["name"] = c.name;
  if (c.name == "ho_K") p["lambda"] = c.lambda;
  if (c.name == "magnetic") {
    p["gauge"] = c.gauge;
    p["B"] = c.B;
  }
  if (c.name == "standard" || c.name == "tanh" || c.name == "exp" || c.name == "cube") p["n"] = c.n;
  p["samples"] = c.samples;
  p["seed"] = c.seed;
  p["tol"] = c.tol;
  return p;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Discrete curvature through three consecutive points.
double curvature(const std::array<double, 3>& a, const std::array<double, 3>& b, const std::array<double, 3>& c) {
  const double ux = b[1] - a[1], uy = b[2] - a[2];
  const double vx = c[1] - b[1], vy = c[2] - b[2];
  const double wx = c[1] - a[1], wy = c[2] - a[2];
  const double den = std::hypot(ux, uy) * std::hypot(vx, vy) * std::hypot(wx, wy);
  return den > 0.0 ? 2.0 * std::abs(ux * vy - uy * vx) / den : 0.0;
}

}  // namespace

Json report_json(const std::string& command, const Json& params, const Report& r) {
  Json j;
  j["command"] = command;
  j["params"] = params;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["name"] = c.name;
    e["residual"] = residual_value(c.residual);
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    j["checks"].push_back(e);
  }
  if (!r.info.empty()) {
    Json info = Json::object();
    for (const auto& [k, v] : r.info) info[k] = v;
    j["info"] = info;
  }
  j["pass"] = r.pass();
  return j;
}

Outcome cmd_structure_check(const RunConfig& c) {
  require(c.samples > 0, "--samples must be positive");
  require(c.tol > 0.0, "--tol must be positive");
  const auto l = linstruct::catalog_make(c.name, catalog_params(c));
  linstruct::AxiomOptions opt;
  opt.samples = c.samples;
  opt.tol = numcore::Tolerance(c.tol, 0.0);
  opt.seed = c.seed;
  Outcome o;
  o.report = linstruct::ls_axiom_report(l, opt);
  o.json = report_json("structure-check", structure_params(c), o.report);
  return o;
}

Outcome cmd_liouville(const RunConfig& c) {
  require(c.samples > 0, "--samples must be positive");
  const auto params = catalog_params(c);
  const auto l = linstruct::catalog_make(c.name, params);
  linstruct::LiouvilleOptions opt;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.tol_pushforward = c.tol;
  Outcome o;
  o.report = linstruct::liouville_report(l, opt, linstruct::liouville_closed_form(c.name, params));
  o.json = report_json("liouville", structure_params(c), o.report);
  return o;
}

Outcome cmd_darboux(const RunConfig& c) {
  require(c.samples > 0, "--samples must be positive");
  const auto l = lagrangian::lagrangian_make(c.name, {c.B, c.k, c.n});
  lagrangian::DarbouxOptions opt;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.tol = c.tol;
  Outcome o;
  o.report = lagrangian::darboux_check(l, opt);
  Json p;
  p["name"] = c.name;
  if (c.name == "standard") {
    p["n"] = c.n;
    p["k"] = c.k;
  }
  if (c.name == "magnetic-symmetric") p["B"] = c.B;
  p["samples"] = c.samples;
  p["seed"] = c.seed;
  p["tol"] = c.tol;
  o.json = report_json("darboux", p, o.report);
  return o;
}

Outcome cmd_magnetic_demo(const RunConfig& c) {
  require(c.B != 0.0, "--B must be nonzero");
  require(c.state.size() == 4, "--state needs four values Q1,Q2,U1,U2");
  require(c.steps > 0 && c.rows > 1, "--steps and --rows must be positive");
  const dynamics::Vector4 state(c.state[0], c.state[1], c.state[2], c.state[3]);
  const auto a = VectorPotential::symmetric({0.0, 0.0, c.B});
  Report r;
  lagrangian::DarbouxOptions dopt;
  dopt.samples = c.samples;
  dopt.seed = c.seed;
  dopt.tol = c.tol;
  r.merge(lagrangian::darboux_check(lagrangian::magnetic_lagrangian(a), dopt), "darboux.");
  dynamics::PropagatorSuiteOptions popt;
  popt.rk4_steps = c.steps;
  r.merge(dynamics::propagator_suite(c.B, state, popt), "flow.");
  dynamics::GammaSuiteOptions gopt;
  gopt.samples = c.samples;
  gopt.seed = c.seed;
  r.merge(dynamics::gamma_suite(a, gopt), "gamma.");

  const double period = 2.0 * std::numbers::pi / std::abs(c.B);
  std::vector<double> grid;
  for (int i = 0; i < c.rows; ++i) grid.push_back(period * i / (c.rows - 1));
  const auto rows = dynamics::exact_trajectory(c.B, state, grid);
  const std::string csv = dynamics::trajectory_csv(rows);
  const auto back = dynamics::parse_trajectory_csv(csv);
  bool same = back.size() == rows.size();
  for (std::size_t i = 0; same && i < rows.size(); ++i) {
    same = std::memcmp(&back[i], &rows[i], sizeof(dynamics::TrajectoryRow)) == 0;
  }
  r.flag("trajectory_csv_roundtrip", same, "bit-identical re-import");
  const auto chi = dynamics::constants_chi(c.B, state);
  r.info["chi1"] = std::to_string(chi.chi1);
  r.info["chi2"] = std::to_string(chi.chi2);
  r.info["larmor_center"] = std::to_string(chi.chi2 / c.B) + "," + std::to_string(-chi.chi1 / c.B);

  Outcome o;
  o.report = r;
  o.csv = csv;
  Json p;
  p["B"] = c.B;
  p["state"] = c.state;
  p["steps"] = c.steps;
  p["rows"] = c.rows;
  p["samples"] = c.samples;
  p["seed"] = c.seed;
  p["tol"] = c.tol;
  o.json = report_json("magnetic-demo", p, r);
  return o;
}

std::vector<Figure1Curve> figure1_curves(double lambda, int grid, double extent, double arc, int steps) {
  require(lambda >= 0.0, "--lambda must be >= 0");
  require(grid >= 1 && steps >= 2 && steps % 2 == 0, "--grid >= 1 and an even --steps >= 2 required");
  require(arc > 0.0 && extent >= 0.0, "--arc must be positive");
  const auto fields = linstruct::ho_basis_fields(lambda);
  std::vector<Figure1Curve> curves;
  const int half = steps / 2;
  const double ds = arc / steps;
  int seed_index = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j, ++seed_index) {
      const double q0 = grid == 1 ? 0.0 : -extent + 2.0 * extent * i / (grid - 1);
      const double p0 = grid == 1 ? 0.0 : -extent + 2.0 * extent * j / (grid - 1);
      for (int f = 0; f < 2; ++f) {
        const auto& field = f == 0 ? fields.first : fields.second;
        auto unit = [&field](double sign) {
          return numcore::Field([&field, sign](const numcore::Point& x) {
            numcore::Point v = field.at(x);
            const double n = std::hypot(v[0], v[1]);
            return numcore::Point{sign * v[0] / n, sign * v[1] / n};
          });
        };
        const auto fwd = numcore::rk4_trajectory(unit(1.0), {q0, p0}, half * ds, half);
        const auto bwd = numcore::rk4_trajectory(unit(-1.0), {q0, p0}, half * ds, half);
        Figure1Curve cv;
        cv.id = 2 * seed_index + f;
        cv.field = f;
        cv.seed = {q0, p0};
        for (int k = half; k >= 1; --k) {
          const auto& s = bwd[static_cast<std::size_t>(k)];
          cv.rows.push_back({-k * ds, s.x[0], s.x[1]});
        }
        for (int k = 0; k <= half; ++k) {
          const auto& s = fwd[static_cast<std::size_t>(k)];
          cv.rows.push_back({k * ds, s.x[0], s.x[1]});
        }
        curves.push_back(std::move(cv));
      }
    }
  }
  return curves;
}

double figure1_max_curvature(const std::vector<Figure1Curve>& curves) {
  double kappa = 0.0;
  for (const auto& cv : curves) {
    for (std::size_t k = 2; k < cv.rows.size(); ++k) {
      kappa = std::max(kappa, curvature(cv.rows[k - 2], cv.rows[k - 1], cv.rows[k]));
    }
  }
  return kappa;
}

std::string figure1_csv(const std::vector<Figure1Curve>& curves) {
  std::string out = "curve_id,t,q,p\n";
  for (const auto& cv : curves) {
    for (const auto& row : cv.rows) {
      out += std::to_string(cv.id);
      for (double v : row) {
        out += ',';
        append_number(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

Report figure1_report(const std::vector<Figure1Curve>& curves, double lambda, double tol) {
  const auto phi = linstruct::ho_K(lambda).phi;
  double transverse = 0.0, kappa = 0.0, origin_kappa = 0.0;
  bool has_origin = false;
  for (const auto& cv : curves) {
    // d/dQ moves Q and keeps P; d/dP the other way round.
    const int keep = cv.field == 0 ? 1 : 0;
    const double ref = phi.to_model(cv.seed)[static_cast<std::size_t>(keep)];
    double ck = 0.0;
    for (std::size_t k = 0; k < cv.rows.size(); ++k) {
      const auto m = phi.to_model({cv.rows[k][1], cv.rows[k][2]});
      transverse = std::max(transverse, std::abs(m[static_cast<std::size_t>(keep)] - ref));
      if (k >= 2) ck = std::max(ck, curvature(cv.rows[k - 2], cv.rows[k - 1], cv.rows[k]));
    }
    kappa = std::max(kappa, ck);
    if (cv.seed[0] == 0.0 && cv.seed[1] == 0.0) {
      has_origin = true;
      origin_kappa = std::max(origin_kappa, ck);
    }
  }
  Report r;
  r.info["curves"] = std::to_string(curves.size());
  r.info["max_curvature"] = std::to_string(kappa);
  r.add("field_equation_residual", transverse, tol, "transverse model coordinate along each curve");
  if (lambda == 0.0) r.add("coordinate_lines_curvature", kappa, 1e-6, "lambda = 0");
  if (has_origin) r.add("origin_curves_curvature", origin_kappa, 1e-6, "curves through (0, 0)");
  return r;
}

Outcome cmd_figure1(const RunConfig& c) {
  const auto curves = figure1_curves(c.lambda, c.grid, c.extent, c.arc, c.steps);
  Outcome o;
  o.report = figure1_report(curves, c.lambda, c.tol);
  o.csv = figure1_csv(curves);
  Json p;
  p["lambda"] = c.lambda;
  p["grid"] = c.grid;
  p["extent"] = c.extent;
  p["arc"] = c.arc;
  p["steps"] = c.steps;
  p["tol"] = c.tol;
  o.json = report_json("figure1", p, o.report);
  return o;
}

Outcome cmd_quantize_demo(const RunConfig& c) {
  require(c.hbar > 0.0, "--hbar must be positive");
  require(c.L > 0.0, "--L must be positive");
  require(c.lambda >= 0.0, "--lambda must be >= 0");
  Report r;
  quantize::WeylSuiteOptions w;
  w.n = c.N;
  w.length = c.L;
  w.hbar = c.hbar;
  w.seed = c.seed;
  w.B = c.B;
  r.merge(quantize::weyl_suite(w), "weyl.");
  r.merge(quantize::hamiltonian_comm_check(c.B, quantize::LatticeGrid::centered(c.N, c.L, 2), c.hbar), "hamiltonian.");
  r.merge(quantize::norm_ratio_report(c.lambda), "measure.");
  r.merge(quantize::ladder_suite(c.lambda, c.hbar, quantize::LatticeGrid::centered(4 * c.N, c.L, 1)), "ladder.");
  r.merge(quantize::pure_state_suite(100, 8, c.seed), "pure_state.");
  moyal::MoyalSuiteOptions m;
  m.hbar = c.hbar;
  m.lambda = c.lambda;
  m.seed = c.seed;
  r.merge(moyal::moyal_suite(m), "moyal.");

  Outcome o;
  o.report = r;
  Json p;
  p["N"] = c.N;
  p["L"] = c.L;
  p["hbar"] = c.hbar;
  p["lambda"] = c.lambda;
  p["B"] = c.B;
  p["seed"] = c.seed;
  o.json = report_json("quantize-demo", p, r);
  Json table = Json::array();
  std::string csv = "sigma,norm_mu,norm_mu_prime,ratio\n";
  for (const auto& row : quantize::norm_ratio_table(c.lambda, {0.5, 1.0, 2.0})) {
    table.push_back({{"sigma", row.sigma}, {"norm_mu", row.norm_mu}, {"norm_mu_prime", row.norm_mu_prime},
                     {"ratio", row.ratio}});
    for (double v : {row.sigma, row.norm_mu, row.norm_mu_prime}) {
      append_number(csv, v);
      csv += ',';
    }
    append_number(csv, row.ratio);
    csv += '\n';
  }
  o.json["norm_ratio_table"] = table;
  o.csv = csv;
  return o;
}

Outcome cmd_moyal_sweep(const RunConfig& c) {
  require(c.at.size() == 2, "--at needs two values q,p");
  require(c.hbar_min > 0.0 && c.hbar_max > c.hbar_min && c.points >= 2, "need 0 < --hbar-min < --hbar-max, --points >= 2");
  moyal::StarConfig{1.0, c.order}.validate();
  const auto f = moyal::named_function(c.f);
  const auto g = moyal::named_function(c.g);
  const auto sweep = moyal::moyal_sweep(f, g, c.at, moyal::log_space(c.hbar_min, c.hbar_max, c.points), c.order,
                                        c.chart_lambda);
  Report r;
  bool exact = true;
  for (const auto& s : sweep.points) exact = exact && s.deviation < 1e-12;
  if (exact) {
    r.add("moyal_minus_poisson", 0.0, 1e-12, "bracket series terminates at first order");
  } else {
    r.add("hbar_slope", std::abs(sweep.slope - 2.0), 0.05, "slope " + std::to_string(sweep.slope));
  }
  Outcome o;
  o.report = r;
  Json p;
  p["f"] = c.f;
  p["g"] = c.g;
  p["at"] = c.at;
  p["hbar_min"] = c.hbar_min;
  p["hbar_max"] = c.hbar_max;
  p["points"] = c.points;
  p["order"] = c.order;
  if (c.chart_lambda) p["lambda"] = *c.chart_lambda;
  o.json = report_json("moyal-sweep", p, r);
  Json rows = Json::array();
  std::string csv = "hbar,deviation\n";
  for (const auto& s : sweep.points) {
    rows.push_back({{"hbar", s.hbar}, {"deviation", s.deviation}});
    append_number(csv, s.hbar);
    csv += ',';
    append_number(csv, s.deviation);
    csv += '\n';
  }
  o.json["sweep"] = rows;
  o.json["slope"] = residual_value(sweep.slope);
  o.csv = csv;
  return o;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become --key value arguments unless the flag was given
// on the command line.
std::vector<std::string> with_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool given = false;
    for (const auto& a : args) given = given || a == key || a.rfind(key + "=", 0) == 0;
    if (!given) {
      args.push_back(key);
      args.push_back(value);
    }
  }
  return args;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string checks_csv(const Report& r) {
  std::string out = "name,residual,tolerance,pass\n";
  for (const auto& c : r.checks) {
    out += c.name + ',';
    append_number(out, c.residual);
    out += ',';
    append_number(out, c.tolerance);
    out += c.pass ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Imported linear structures, Lagrangian geometry and desk-scale quantization checks", "altlin"};
  app.require_subcommand(1);
  std::map<std::string, RunConfig> configs;

  auto common = [&](CLI::App* sub, RunConfig& c) {
    c.command = sub->get_name();
    sub->add_option("--output,-o", c.output, "Write the report (or CSV) here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--config", c.config, "key=value file; flags on the command line win");
  };
  auto structure_opts = [&](CLI::App* sub, RunConfig& c) {
    sub->add_option("--name", c.name, "Catalog structure")->required()->check(CLI::IsMember(linstruct::catalog_names()));
    sub->add_option("--n", c.n, "Dimension for standard, tanh, exp, cube");
    sub->add_option("--lambda", c.lambda, "ho_K deformation");
    sub->add_option("--B", c.B, "Field strength along q3 (magnetic)");
    sub->add_option("--gauge", c.gauge, "magnetic gauge")->check(CLI::IsMember({"symmetric", "general"}));
    sub->add_option("--samples", c.samples, "Sample count");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--tol", c.tol, "Residual tolerance");
  };

  {
    auto& c = configs["structure-check"];
    auto* sub = app.add_subcommand("structure-check", "Vector-space axioms of an imported structure");
    common(sub, c);
    structure_opts(sub, c);
  }
  {
    auto& c = configs["liouville"];
    c.samples = 100;
    c.seed = 5;
    c.tol = 1e-9;
    auto* sub = app.add_subcommand("liouville", "Dilation field: jets vs pushforward vs flow difference");
    common(sub, c);
    structure_opts(sub, c);
  }
  {
    auto& c = configs["darboux"];
    c.name = "standard";
    c.n = 3;
    c.samples = 100;
    c.seed = 11;
    auto* sub = app.add_subcommand("darboux", "Adapted frame and Darboux form of omega_L");
    common(sub, c);
    sub->add_option("--name", c.name, "Lagrangian")->check(CLI::IsMember(lagrangian::lagrangian_names()));
    sub->add_option("--n", c.n, "Degrees of freedom (standard)");
    sub->add_option("--k", c.k, "Spring constant (standard)");
    sub->add_option("--B", c.B, "Field strength (magnetic-symmetric)");
    sub->add_option("--samples", c.samples, "Sample count");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--tol", c.tol, "Residual tolerance");
  }
  {
    auto& c = configs["magnetic-demo"];
    c.samples = 100;
    c.seed = 11;
    auto* sub = app.add_subcommand("magnetic-demo", "Charged particle in a constant field, end to end");
    common(sub, c);
    sub->add_option("--B", c.B, "Field strength");
    sub->add_option("--state", c.state, "Initial Q1,Q2,U1,U2")->delimiter(',')->expected(4);
    sub->add_option("--steps", c.steps, "RK4 steps over one period");
    sub->add_option("--rows", c.rows, "Trajectory rows over one period");
    sub->add_option("--samples", c.samples, "Sample count for the field checks");
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--tol", c.tol, "Darboux tolerance");
    sub->add_option("--csv", c.csv, "Write the trajectory CSV here");
  }
  {
    auto& c = configs["figure1"];
    c.format = "csv";
    c.steps = 200;
    auto* sub = app.add_subcommand("figure1", "Integral curves of d/dQ and d/dP in the (q, p) plane");
    common(sub, c);
    sub->add_option("--lambda", c.lambda, "ho_K deformation (>= 0)");
    sub->add_option("--grid", c.grid, "Seeds per axis");
    sub->add_option("--extent", c.extent, "Seeds span [-extent, extent]^2");
    sub->add_option("--arc", c.arc, "Arc length of each curve");
    sub->add_option("--steps", c.steps, "RK4 steps per curve (even)");
    sub->add_option("--tol", c.tol, "Field-equation tolerance");
  }
  {
    auto& c = configs["quantize-demo"];
    auto* sub = app.add_subcommand("quantize-demo", "Weyl operators, commutators, measures, ladders, Moyal");
    common(sub, c);
    sub->add_option("--N", c.N, "Lattice points per axis (power of two)");
    sub->add_option("--L", c.L, "Box length");
    sub->add_option("--hbar", c.hbar, "Planck constant");
    sub->add_option("--lambda", c.lambda, "ho_K deformation");
    sub->add_option("--B", c.B, "Field strength");
    sub->add_option("--seed", c.seed, "RNG seed");
  }
  {
    auto& c = configs["moyal-sweep"];
    auto* sub = app.add_subcommand("moyal-sweep", "Moyal minus Poisson bracket against hbar");
    common(sub, c);
    sub->add_option("--f", c.f, "First function")->check(CLI::IsMember(moyal::function_names()));
    sub->add_option("--g", c.g, "Second function")->check(CLI::IsMember(moyal::function_names()));
    sub->add_option("--at", c.at, "Point q,p")->delimiter(',')->expected(2);
    sub->add_option("--hbar-min", c.hbar_min, "Smallest hbar");
    sub->add_option("--hbar-max", c.hbar_max, "Largest hbar");
    sub->add_option("--points", c.points, "Number of hbar values");
    sub->add_option("--order", c.order, "Series truncation (<= 3)");
    sub->add_option("--lambda", c.chart_lambda, "Take brackets in the ho_K chart with this lambda");
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = with_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const RunConfig& c = configs.at(chosen->get_name());
  Outcome o;
  try {
    if (c.command == "structure-check") o = cmd_structure_check(c);
    else if (c.command == "liouville") o = cmd_liouville(c);
    else if (c.command == "darboux") o = cmd_darboux(c);
    else if (c.command == "magnetic-demo") o = cmd_magnetic_demo(c);
    else if (c.command == "figure1") o = cmd_figure1(c);
    else if (c.command == "quantize-demo") o = cmd_quantize_demo(c);
    else o = cmd_moyal_sweep(c);
  } catch (const UnknownName& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (c.format == "csv") {
      const bool data = c.command == "figure1" || c.command == "magnetic-demo" || c.command == "quantize-demo" ||
                        c.command == "moyal-sweep";
      write_text(c.output, data ? o.csv : checks_csv(o.report), out);
    } else {
      write_text(c.output, o.json.dump(2) + "\n", out);
    }
    if (!c.csv.empty()) write_text(c.csv, o.csv, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  for (const auto& chk : o.report.checks) {
    if (!chk.pass) err << "FAIL " << chk.name << " residual " << chk.residual << " > " << chk.tolerance << "\n";
  }
  return o.exit_code();
}

}  // namespace altlin::cli
