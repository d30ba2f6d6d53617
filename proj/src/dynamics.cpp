#include "altlin/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "altlin/errors.hpp"
#include "altlin/lagrangian.hpp"

namespace altlin::dynamics {

using numcore::Jet;
using numcore::lift;

namespace {

std::vector<Jet> cross(std::span<const Jet> u, const std::vector<Jet>& b) {
  return {u[1] * b[2] - u[2] * b[1], u[2] * b[0] - u[0] * b[2], u[0] * b[1] - u[1] * b[0]};
}

Matrix omega_d() {
  Matrix w = Matrix::Zero(4, 4);
  w.topRightCorner(2, 2) = Matrix::Identity(2, 2);
  w.bottomLeftCorner(2, 2) = -Matrix::Identity(2, 2);
  return w;
}

Matrix generator(double b) {
  Matrix g(4, 4);
  g << 0, b / 2, 1, 0,
      -b / 2, 0, 0, 1,
      -b * b / 4, 0, 0, b / 2,
      0, -b * b / 4, -b / 2, 0;
  return g;
}

void append(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

VectorField gamma_magnetic(const Eigen::Vector3d& b) {
  return {6, [b](std::span<const Jet> x) {
            const auto u = x.subspan(3, 3);
            const auto f = cross(u, {Jet(b.x()), Jet(b.y()), Jet(b.z())});
            return std::vector<Jet>{u[0], u[1], u[2], f[0], f[1], f[2]};
          }};
}

VectorField gamma_lorentz(const VectorPotential& a) {
  return {6, [a](std::span<const Jet> x) {
            // curl A needs one derivative of A; lift keeps the result a jet.
            const auto b = lift(x.subspan(0, 3), 1, [&](std::span<const Jet> q) {
              const auto pot = a(q);
              auto d = [&](int c, int v) { return pot[static_cast<std::size_t>(c)].derivative(v); };
              return std::vector<Jet>{d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
            });
            const auto u = x.subspan(3, 3);
            const auto f = cross(u, b);
            return std::vector<Jet>{u[0], u[1], u[2], f[0], f[1], f[2]};
          }};
}

ScalarField kinetic_energy() {
  return [](std::span<const Jet> x) { return 0.5 * (x[3] * x[3] + x[4] * x[4] + x[5] * x[5]); };
}

PhaseFlow flow_generator(double b) {
  PhaseFlow flow;
  flow.B = b;
  flow.G = generator(b);
  flow.Omega_D = omega_d();
  flow.F = [b](double t) {
    Matrix f(4, 4);
    if (b == 0.0) {
      f << 1, 0, t, 0, 0, 1, 0, t, 0, 0, 1, 0, 0, 0, 0, 1;
      return f;
    }
    const double c = std::cos(b * t);
    const double s = std::sin(b * t);
    f << (1 + c) / 2, s / 2, s / b, (1 - c) / b,
        -s / 2, (1 + c) / 2, (c - 1) / b, s / b,
        -b * s / 4, b * (c - 1) / 4, (1 + c) / 2, s / 2,
        b * (1 - c) / 4, -b * s / 4, -s / 2, (1 + c) / 2;
    return f;
  };
  flow.dF = [b](double t) {
    Matrix d(4, 4);
    const double c = std::cos(b * t);
    const double s = std::sin(b * t);
    d << -(b / 2) * s, (b / 2) * c, c, s,
        -(b / 2) * c, -(b / 2) * s, -s, c,
        -(b * b / 4) * c, -(b * b / 4) * s, -(b / 2) * s, (b / 2) * c,
        (b * b / 4) * s, -(b * b / 4) * c, -(b / 2) * c, -(b / 2) * s;
    return d;
  };
  return flow;
}

PhaseFlow flow_from_generator(const Matrix& g, double b) {
  PhaseFlow flow;
  flow.B = b;
  flow.G = g;
  flow.Omega_D = omega_d();
  flow.F = [g](double t) { return numcore::mat_exp(t * g); };
  flow.dF = [g](double t) { return Matrix(g * numcore::mat_exp(t * g)); };
  return flow;
}

Report generator_symplectic_check(const PhaseFlow& flow, const SymplecticCheckOptions& opt) {
  std::vector<double> times = opt.times;
  if (times.empty()) {
    for (int i = 1; i <= 100; ++i) times.push_back(0.1 * i);
  }
  Report r;
  const Matrix& w = flow.Omega_D;
  r.add("generator_identity", (flow.G.transpose() * w + w * flow.G).cwiseAbs().maxCoeff(), 0.0,
        "G^T Omega_D + Omega_D G, exact");
  double worst = 0.0;
  for (double t : times) {
    const Matrix f = flow.F(t);
    worst = std::max(worst, (f.transpose() * w * f - w).cwiseAbs().maxCoeff());
  }
  r.add("propagator_symplectic", worst, opt.tol, "F^T Omega_D F - Omega_D");
  return r;
}

MotionConstants constants_chi(double b, const Vector4& s) {
  return {s(2) - 0.5 * b * s(1), s(3) + 0.5 * b * s(0)};
}

std::vector<OrbitPoint> larmor_orbit(double b, const Vector4& state, const std::vector<double>& t_grid) {
  if (b == 0.0) throw std::invalid_argument("larmor_orbit needs B != 0");
  const auto chi = constants_chi(b, state);
  const Eigen::Vector2d center(chi.chi2 / b, -chi.chi1 / b);
  const Eigen::Vector2d q0 = state.head<2>() - center;
  std::vector<OrbitPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const double c = std::cos(b * t);
    const double s = std::sin(b * t);
    const Eigen::Vector2d qt(q0.x() * c + q0.y() * s, -q0.x() * s + q0.y() * c);
    out.push_back({t, center, qt, center + qt});
  }
  return out;
}

VectorField pushforward_gamma(const VectorPotential& a) {
  return {6, [a](std::span<const Jet> x) {
            return lift(x, 1, [&](std::span<const Jet> local) {
              const int m = numcore::common_order(local) - 1;
              const auto pot = a(local.subspan(0, 3));
              std::vector<Jet> v;
              for (std::size_t k = 0; k < 3; ++k) v.push_back((local[3 + k] - pot[k]).truncate(m));
              std::vector<Jet> out(v.begin(), v.end());
              for (int i = 0; i < 3; ++i) {
                Jet s(0.0);
                for (std::size_t k = 0; k < 3; ++k) s += v[k] * pot[k].derivative(i);
                out.push_back(s);
              }
              return out;
            });
          }};
}

ScalarField hamiltonian_tilde(const VectorPotential& a) {
  return [a](std::span<const Jet> x) {
    const auto pot = a(x.subspan(0, 3));
    Jet h(0.0);
    for (std::size_t k = 0; k < 3; ++k) {
      const Jet v = x[3 + k] - pot[k];
      h += 0.5 * (v * v);
    }
    return h;
  };
}

numcore::Field planar_field(double b) {
  const Matrix g = generator(b);
  return [g](const numcore::Point& x) {
    const Vector v = g * Eigen::Map<const Vector>(x.data(), 4);
    return numcore::Point(v.data(), v.data() + 4);
  };
}

double planar_energy(double b, const Vector4& s) {
  const double v1 = s(2) + 0.5 * b * s(1);
  const double v2 = s(3) - 0.5 * b * s(0);
  return 0.5 * (v1 * v1 + v2 * v2);
}

namespace {
TrajectoryRow make_row(double b, double t, const Vector4& s) {
  const auto chi = constants_chi(b, s);
  return {t, s(0), s(1), s(2), s(3), chi.chi1, chi.chi2, planar_energy(b, s)};
}
}  // namespace

std::vector<TrajectoryRow> exact_trajectory(double b, const Vector4& state, const std::vector<double>& t_grid,
                                            Execution exec) {
  const PhaseFlow flow = flow_generator(b);
  std::vector<TrajectoryRow> rows(t_grid.size());
  for_each_index(t_grid.size(), exec, [&](std::size_t i) {
    const Vector4 s = flow.F(t_grid[i]) * state;
    rows[i] = make_row(b, t_grid[i], s);
  });
  return rows;
}

std::vector<TrajectoryRow> rk4_planar_trajectory(double b, const Vector4& state, double t, int steps) {
  const auto samples = numcore::rk4_trajectory(planar_field(b), {state(0), state(1), state(2), state(3)}, t, steps);
  std::vector<TrajectoryRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(make_row(b, s.t, Vector4(s.x[0], s.x[1], s.x[2], s.x[3])));
  return rows;
}

std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out = "t,Q1,Q2,U1,U2,chi1,chi2,H\n";
  for (const auto& r : rows) {
    const double v[8] = {r.t, r.Q1, r.Q2, r.U1, r.U2, r.chi1, r.chi2, r.H};
    for (int i = 0; i < 8; ++i) {
      if (i) out += ',';
      append(out, v[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,Q1,Q2,U1,U2,chi1,chi2,H") {
    throw std::invalid_argument("trajectory CSV: unexpected header");
  }
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[8];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 8; ++i) {
      const auto res = std::from_chars(p, end, v[i]);
      if (res.ec != std::errc()) throw std::invalid_argument("trajectory CSV: bad number in '" + line + "'");
      p = res.ptr;
      if (i < 7) {
        if (p == end || *p != ',') throw std::invalid_argument("trajectory CSV: expected 8 columns");
        ++p;
      }
    }
    if (p != end) throw std::invalid_argument("trajectory CSV: trailing data");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  return rows;
}

Report propagator_suite(double b, const Vector4& state, const PropagatorSuiteOptions& opt) {
  if (b == 0.0) throw std::invalid_argument("propagator_suite needs B != 0");
  const PhaseFlow flow = flow_generator(b);
  const Matrix id = Matrix::Identity(4, 4);
  const double period = 2.0 * std::numbers::pi / std::abs(b);
  auto maxabs = [](const Matrix& m) { return m.cwiseAbs().maxCoeff(); };
  Report r;
  r.info["B"] = std::to_string(b);
  r.add("F0_identity", maxabs(flow.F(0.0) - id), 0.0, "exact");
  r.add("dF0_generator", maxabs(flow.dF(0.0) - flow.G), 0.0, "exact");
  r.merge(generator_symplectic_check(flow, {opt.tol_symplectic, {}}));

  const double t_end = opt.span_periods > 0.0 ? opt.span_periods * period : 20.0 / std::abs(b);
  double vs_exp = 0.0, inv_d = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = t_end * i / 200.0;
    const Matrix f = flow.F(t);
    vs_exp = std::max(vs_exp, maxabs(f - numcore::mat_exp(t * flow.G)));
    inv_d = std::max(inv_d, maxabs(f.inverse() * flow.dF(t) - flow.G));
  }
  r.add("propagator_vs_mat_exp", vs_exp, opt.tol_exact, "t in [0, " + std::to_string(t_end) + "]");
  r.add("inverse_times_derivative", inv_d, opt.tol_exact, "F^-1 dF/dt - G");

  double group = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double t = period * i / 10.0;
      const double s = period * j / 7.0;
      group = std::max(group, maxabs(flow.F(t) * flow.F(s) - flow.F(t + s)));
    }
  }
  r.add("group_law", group, opt.tol_symplectic, "10 x 10 grid");
  r.add("period_return", maxabs(flow.F(period) - id), 1e-12, "F(2 pi / B)");

  const auto chi0 = constants_chi(b, state);
  const double h0 = planar_energy(b, state);
  double chi_exact = 0.0, energy = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const Vector4 s = flow.F(period * i / 1000.0) * state;
    const auto c = constants_chi(b, s);
    chi_exact = std::max({chi_exact, std::abs(c.chi1 - chi0.chi1), std::abs(c.chi2 - chi0.chi2)});
    energy = std::max(energy, std::abs(planar_energy(b, s) - h0));
  }
  r.add("chi_drift_exact", chi_exact, opt.tol_exact);
  r.add("energy_drift_exact", energy, opt.tol_exact);

  const auto rows = rk4_planar_trajectory(b, state, period, opt.rk4_steps);
  double chi_rk4 = 0.0;
  for (const auto& row : rows) {
    chi_rk4 = std::max({chi_rk4, std::abs(row.chi1 - chi0.chi1), std::abs(row.chi2 - chi0.chi2)});
  }
  r.add("chi_drift_rk4", chi_rk4, opt.tol_rk4, std::to_string(opt.rk4_steps) + " steps over one period");

  // A fixed generic state: the caller's state may sit at the orbit center,
  // where the integrator is exact and no order can be read off.
  const Vector4 probe(0.3, -0.7, 1.1, 0.4);
  auto rk4_error = [&](int steps) {
    const auto end = numcore::rk4_flow(planar_field(b), {probe(0), probe(1), probe(2), probe(3)}, period, steps);
    const Vector4 exact = flow.F(period) * probe;
    return (Vector4(end[0], end[1], end[2], end[3]) - exact).cwiseAbs().maxCoeff();
  };
  const double order = std::log2(rk4_error(50) / rk4_error(100));
  const double deficit = std::isfinite(order) ? std::max(0.0, opt.min_rk4_order - order) : HUGE_VAL;
  r.add("rk4_order_deficit", deficit, 0.0, "observed order " + std::to_string(order));

  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(period * i / 100.0);
  const auto orbit = larmor_orbit(b, state, grid);
  double split = 0.0, radius = 0.0;
  const double r0 = orbit.front().q_tilde.norm();
  for (const auto& o : orbit) {
    const Vector4 s = flow.F(o.t) * state;
    split = std::max(split, (o.q - s.head<2>()).cwiseAbs().maxCoeff());
    radius = std::max(radius, std::abs(o.q_tilde.norm() - r0));
  }
  r.add("larmor_vs_flow", split, opt.tol_exact, "center + rotating part vs F(t) state");
  r.add("larmor_radius", radius, opt.tol_exact);
  r.add("larmor_return", (orbit.back().q - orbit.front().q).cwiseAbs().maxCoeff(), opt.tol_exact);
  return r;
}

Report gamma_suite(const VectorPotential& a, const GammaSuiteOptions& opt) {
  const auto pts = numcore::sample_box(numcore::Point(6, -opt.box), numcore::Point(6, opt.box), opt.samples, opt.seed);
  const auto lag = lagrangian::magnetic_lagrangian(a);
  const auto omega_l = lagrangian::symplectic_form(lag);
  const ScalarField h = lagrangian::energy(lag);
  const VectorField gamma = gamma_lorentz(a);
  const auto i_gamma = geometry::interior_product(gamma, omega_l);
  const auto dh = geometry::differential(h, 6);
  const ScalarField speed = geometry::lie_derivative(gamma, kinetic_energy());
  const auto chart = lagrangian::magnetic_chart(a);
  const VectorField pushed = geometry::pushforward(chart, gamma);
  const VectorField tilde = pushforward_gamma(a);
  const auto i_tilde = geometry::interior_product(tilde, geometry::TwoForm::canonical(3));
  const auto dh_tilde = geometry::differential(hamiltonian_tilde(a), 6);

  const std::size_t n = pts.size();
  std::vector<double> r1(n), r2(n), r3(n), r4(n);
  auto diff = [](const numcore::Point& x, const numcore::Point& y) {
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
    return m;
  };
  for_each_index(n, opt.exec, [&](std::size_t i) {
    const auto& x = pts[i];
    r1[i] = diff(i_gamma.at(x), dh.at(x));
    r2[i] = std::abs(numcore::evaluate(speed, x));
    const auto y = chart.to_manifold(x);
    r3[i] = diff(pushed.at(y), tilde.at(y));
    r4[i] = diff(i_tilde.at(y), dh_tilde.at(y));
  });
  auto worst = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, e);
    return m;
  };
  Report r;
  r.info["potential"] = a.name;
  r.add("gamma_hamiltonian", worst(r1), opt.tol, "i_Gamma omega_L - dH");
  r.add("speed_conservation", worst(r2), opt.tol, "Gamma(|u|^2 / 2)");
  r.add("pushforward_matches", worst(r3), opt.tol, "phi_* Gamma vs closed form");
  r.add("pushforward_hamiltonian", worst(r4), opt.tol, "i_Gamma~ dQ^dU - dH~");
  return r;
}

}  // namespace altlin::dynamics
