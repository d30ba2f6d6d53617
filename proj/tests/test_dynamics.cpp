#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>

#include "altlin/dynamics.hpp"
#include "altlin/geometry.hpp"
#include "altlin/lagrangian.hpp"

using namespace altlin;
using namespace altlin::dynamics;
using numcore::Point;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double max_diff(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<Point> points(int count, std::uint64_t seed) {
  return numcore::sample_box(Point(6, -2.0), Point(6, 2.0), count, seed);
}

}  // namespace

TEST_CASE("free motion when B = 0") {
  const auto g = gamma_magnetic({0.0, 0.0, 0.0});
  for (const auto& x : points(20, 1)) CHECK(max_diff(g.at(x), {x[3], x[4], x[5], 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("the second-order field is Hamiltonian and keeps the speed") {
  const Eigen::Vector3d b(0.3, -1.1, 0.8);
  const auto g = gamma_magnetic(b);
  const auto l = lagrangian::magnetic_lagrangian(VectorPotential::symmetric(b));
  const auto ig = geometry::interior_product(g, lagrangian::symplectic_form(l));
  const auto dh = geometry::differential(lagrangian::energy(l), 6);
  const auto ke = geometry::lie_derivative(g, kinetic_energy());
  for (const auto& x : points(100, 2)) {
    CHECK(max_diff(ig.at(x), dh.at(x)) < 1e-10);
    CHECK(std::abs(numcore::evaluate(ke, x)) < 1e-12);
  }
}

TEST_CASE("gamma suites for both gauges") {
  for (const auto& a : {VectorPotential::symmetric({0.0, 0.0, 1.0}), VectorPotential::general()}) {
    CAPTURE(a.name);
    const auto r = gamma_suite(a);
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("pushforward of Gamma with A = 0 is Gamma") {
  const auto p = pushforward_gamma(VectorPotential::zero());
  const auto g = gamma_magnetic({0.0, 0.0, 0.0});
  for (const auto& x : points(20, 3)) CHECK(max_diff(p.at(x), g.at(x)) == 0.0);
}

TEST_CASE("pushed Gamma in the symmetric gauge matches the planar display") {
  const double b = 1.4;
  const auto p = pushforward_gamma(VectorPotential::symmetric({0.0, 0.0, b}));
  for (const auto& x : points(50, 4)) {
    const auto v = p.at(x);
    // dQ1/dt = U1 + B/2 Q2, dU1/dt = B/2 (U2 - B/2 Q1)
    CHECK(v[0] == doctest::Approx(x[3] + b / 2 * x[1]));
    CHECK(v[1] == doctest::Approx(x[4] - b / 2 * x[0]));
    CHECK(v[3] == doctest::Approx(b / 2 * (x[4] - b / 2 * x[0])));
    CHECK(v[4] == doctest::Approx(-b / 2 * (x[3] + b / 2 * x[1])));
    CHECK(v[5] == 0.0);
  }
}

TEST_CASE("closed-form propagator basics") {
  for (double b : {0.5, 1.0, 2.0}) {
    CAPTURE(b);
    const auto f = flow_generator(b);
    CHECK(max_abs(f.F(0.0) - Matrix::Identity(4, 4)) == 0.0);
    CHECK(max_abs(f.dF(0.0) - f.G) == 0.0);
    CHECK(max_abs(f.F(2 * kPi / b) - Matrix::Identity(4, 4)) < 1e-12);
    CHECK(max_abs(f.G.transpose() * f.Omega_D + f.Omega_D * f.G) == 0.0);
    const auto oracle = flow_from_generator(f.G, b);
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double t = 20.0 / b * k / 200;
      worst = std::max(worst, max_abs(f.F(t) - oracle.F(t)));
    }
    CHECK(worst < 1e-10);
  }
  const Matrix g = flow_generator(1.0).G;
  CHECK(g(0, 1) == 0.5);
  CHECK(g(2, 0) == -0.25);
  CHECK(g(3, 2) == -0.5);
}

TEST_CASE("group law on a 10 x 10 grid") {
  const auto f = flow_generator(1.3);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double t = 0.37 * i, s = -0.61 * j;
      CHECK(max_abs(f.F(t) * f.F(s) - f.F(t + s)) < 1e-11);
    }
  }
}

TEST_CASE("generator check and its negative control") {
  const auto f = flow_generator(1.0);
  const auto r = generator_symplectic_check(f);
  CHECK(r.pass());
  CHECK(r.find("generator_identity")->residual == 0.0);
  CHECK(r.find("propagator_symplectic")->residual < 1e-11);

  Matrix bad = f.G;
  bad(2, 3) = -bad(2, 3);
  const auto rb = generator_symplectic_check(flow_from_generator(bad, 1.0));
  CHECK_FALSE(rb.pass());
  CHECK(rb.find("generator_identity")->residual > 0.5);
}

TEST_CASE("constants of motion") {
  const Vector4 s(1.0, 0.0, 0.0, 1.0);
  const auto c = constants_chi(1.0, s);
  CHECK(c.chi1 == 0.0);
  CHECK(c.chi2 == 1.5);
  const auto free = constants_chi(0.0, Vector4(0.3, -0.2, 0.7, 0.9));
  CHECK(free.chi1 == 0.7);
  CHECK(free.chi2 == 0.9);

  const auto f = flow_generator(1.0);
  for (int k = 0; k <= 100; ++k) {
    const Vector4 st = f.F(0.2 * k) * s;
    const auto ck = constants_chi(1.0, st);
    CHECK(std::abs(ck.chi1 - c.chi1) < 1e-10);
    CHECK(std::abs(ck.chi2 - c.chi2) < 1e-10);
    CHECK(std::abs(planar_energy(1.0, st) - planar_energy(1.0, s)) < 1e-10);
  }
}

TEST_CASE("Larmor orbit") {
  const double b = 1.7;
  const Vector4 s(0.4, -0.3, 0.9, 0.2);
  std::vector<double> grid;
  for (int k = 0; k <= 50; ++k) grid.push_back(2 * kPi / b * k / 50);
  const auto orbit = larmor_orbit(b, s, grid);
  const auto f = flow_generator(b);
  const double r0 = orbit.front().q_tilde.norm();
  for (const auto& p : orbit) {
    const Vector4 st = f.F(p.t) * s;
    CHECK((p.q - st.head<2>()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(p.q_tilde.norm() - r0) < 1e-10);
  }
  CHECK((orbit.back().q - s.head<2>()).cwiseAbs().maxCoeff() < 1e-10);

  // chi = 0 puts the center at the origin
  const Vector4 centered(0.5, 0.0, 0.0, -b / 2 * 0.5);
  const auto o2 = larmor_orbit(b, centered, {0.0, 1.0});
  CHECK(o2[0].center.norm() == 0.0);
  CHECK(std::abs(o2[1].q.norm() - 0.5) < 1e-12);

  CHECK_THROWS_AS(larmor_orbit(0.0, s, grid), std::invalid_argument);
}

TEST_CASE("RK4 converges to the exact flow at fourth order") {
  const double b = 1.0;
  const Vector4 s(0.3, -0.7, 1.1, 0.4);
  const double t = 2 * kPi;
  const Vector4 exact = flow_generator(b).F(t) * s;
  std::vector<double> err;
  for (int steps : {50, 100, 200}) {
    const auto rows = rk4_planar_trajectory(b, s, t, steps);
    const auto& e = rows.back();
    err.push_back((Vector4(e.Q1, e.Q2, e.U1, e.U2) - exact).cwiseAbs().maxCoeff());
  }
  CHECK(std::log2(err[0] / err[1]) >= 3.8);
  CHECK(std::log2(err[1] / err[2]) >= 3.8);
}

TEST_CASE("propagator suites") {
  for (double b : {0.5, 1.0, 2.0}) {
    CAPTURE(b);
    const auto r = propagator_suite(b, Vector4(1.0, 0.0, 0.0, 1.0));
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("trajectory CSV round-trips bit for bit and serial matches parallel") {
  std::vector<double> grid;
  for (int k = 0; k < 37; ++k) grid.push_back(0.173 * k);
  const Vector4 s(1.0 / 3, -0.7, 0.1, std::sqrt(2.0));
  const auto par = exact_trajectory(1.1, s, grid, Execution::kParallel);
  const auto ser = exact_trajectory(1.1, s, grid, Execution::kSerial);
  REQUIRE(par.size() == ser.size());
  CHECK(std::memcmp(par.data(), ser.data(), par.size() * sizeof(TrajectoryRow)) == 0);

  const std::string csv = trajectory_csv(par);
  CHECK(csv.rfind("t,Q1,Q2,U1,U2,chi1,chi2,H\n", 0) == 0);
  const auto back = parse_trajectory_csv(csv);
  REQUIRE(back.size() == par.size());
  CHECK(std::memcmp(back.data(), par.data(), par.size() * sizeof(TrajectoryRow)) == 0);
  CHECK(trajectory_csv(back) == csv);
}
