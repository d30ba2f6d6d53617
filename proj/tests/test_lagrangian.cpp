#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "altlin/errors.hpp"
#include "altlin/geometry.hpp"
#include "altlin/lagrangian.hpp"

using namespace altlin;
using namespace altlin::lagrangian;
using numcore::Jet;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double max_diff(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<Point> points(int dim, int count, std::uint64_t seed) {
  return numcore::sample_box(Point(static_cast<std::size_t>(dim), -2.0), Point(static_cast<std::size_t>(dim), 2.0),
                             count, seed);
}

// A regular Lagrangian with q-dependent mass and a gyroscopic term.
Lagrangian warped() {
  Lagrangian l;
  l.name = "warped";
  l.n = 2;
  l.L = [](std::span<const Jet> x) {
    const Jet m = 2.0 + numcore::sin(x[0]) * 0.5;
    return 0.5 * m * x[2] * x[2] + 0.5 * x[3] * x[3] + 0.3 * x[2] * x[3] + x[1] * x[2] - numcore::cos(x[0] * x[1]);
  };
  return l;
}

ScalarField chi_cubic() {
  return [](std::span<const Jet> q) { return q[0] * q[0] * q[1]; };
}

}  // namespace

TEST_CASE("Cartan form components") {
  const auto std3 = standard_lagrangian(3);
  for (const auto& x : points(6, 20, 1)) {
    const auto th = cartan_form(std3).at(x);
    for (int i = 0; i < 3; ++i) {
      CHECK(th[i] == doctest::Approx(x[3 + i]));
      CHECK(th[3 + i] == 0.0);
    }
  }
  const auto a = VectorPotential::general();
  const auto mag = magnetic_lagrangian(a);
  for (const auto& x : points(6, 20, 2)) {
    const auto th = cartan_form(mag).at(x);
    const Eigen::Vector3d ax = a.at({x[0], x[1], x[2]});
    for (int i = 0; i < 3; ++i) CHECK(th[i] == doctest::Approx(x[3 + i] + ax[i]));
  }
  const auto th0 = cartan_form(std3).at(Point{0.3, -0.2, 1.0, 0.0, 0.0, 0.0});
  CHECK(max_diff(th0, Point(6, 0.0)) == 0.0);
}

TEST_CASE("symplectic form of the standard and magnetic Lagrangians") {
  const Matrix canon = geometry::TwoForm::canonical(3).at(Point(6, 0.0));
  for (const auto& x : points(6, 20, 3)) CHECK(max_abs(symplectic_form(standard_lagrangian(3)).at(x) - canon) == 0.0);

  const double b = 1.7;
  const auto mag = magnetic_lagrangian(VectorPotential::symmetric({0.0, 0.0, b}));
  for (const auto& x : points(6, 20, 4)) {
    const Matrix w = symplectic_form(mag).at(x);
    Matrix expect = canon;
    expect(0, 1) = -b;
    expect(1, 0) = b;
    CHECK(max_abs(w - expect) < 1e-15);
  }
}

TEST_CASE("degenerate Lagrangians are refused") {
  Lagrangian l;
  l.name = "cubic";
  l.n = 1;
  l.L = [](std::span<const Jet> x) { return x[1] * x[1] * x[1]; };
  CHECK_THROWS_AS(require_regular(l, {0.5, 0.0}), DegenerateLagrangian);
  CHECK_THROWS_AS(symplectic_form(l).at({0.5, 0.0}), DegenerateLagrangian);
  CHECK_THROWS_AS(adapted_frame_at(l, {0.5, 0.0}), DegenerateLagrangian);
  CHECK(require_regular(l, {0.5, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("adapted frame of the standard Lagrangian is the coordinate frame") {
  const auto f = adapted_frame_at(standard_lagrangian(2, 3.0), {0.1, 0.2, 0.3, 0.4});
  const Matrix id = Matrix::Identity(4, 4);
  CHECK(max_abs(f.X - id.leftCols(2)) == 0.0);
  CHECK(max_abs(f.Y - id.rightCols(2)) == 0.0);
}

TEST_CASE("magnetic frame in the symmetric gauge") {
  const double b = 1.3;
  const auto mag = magnetic_lagrangian(VectorPotential::symmetric({0.0, 0.0, b}));
  for (const auto& x : points(6, 10, 5)) {
    const auto f = adapted_frame_at(mag, x);
    // X_1 = d/dq1 - (B/2) d/du2
    Eigen::VectorXd x1 = Eigen::VectorXd::Zero(6);
    x1(0) = 1.0;
    x1(4) = -b / 2;
    CHECK((f.X.col(0) - x1).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::VectorXd x2 = Eigen::VectorXd::Zero(6);
    x2(1) = 1.0;
    x2(3) = b / 2;
    CHECK((f.X.col(1) - x2).cwiseAbs().maxCoeff() < 1e-15);
  }
  // general potential: (X_j)^i = -d_j A_i
  const auto a = VectorPotential::general();
  const auto gen = magnetic_lagrangian(a);
  const Point x{0.7, -0.3, 1.1, 0.2, 0.5, -0.9};
  const auto f = adapted_frame_at(gen, x);
  CHECK(f.X(4, 0) == doctest::Approx(-x[2]));
  CHECK(f.X(4, 2) == doctest::Approx(-x[0]));
  CHECK(f.X(3, 1) == 0.0);
}

TEST_CASE("duality pairings and defining interior products for a non-trivial Lagrangian") {
  const auto l = warped();
  const auto w = symplectic_form(l);
  const auto fr = adapted_frame(l);
  for (const auto& x : points(4, 100, 6)) {
    const auto f = adapted_frame_at(l, x);
    const Matrix id = Matrix::Identity(2, 2);
    CHECK(max_abs(f.alpha * f.X - id) < 1e-10);
    CHECK(max_abs(f.alpha * f.Y) < 1e-10);
    CHECK(max_abs(f.beta * f.Y - id) < 1e-10);
    CHECK(max_abs(f.beta * f.X) < 1e-10);
    for (int j = 0; j < 2; ++j) {
      const auto ix = geometry::interior_product(fr.X[j], w).at(x);
      const auto iy = geometry::interior_product(fr.Y[j], w).at(x);
      const auto beta = fr.beta[j].at(x);
      const auto alpha = fr.alpha[j].at(x);
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(ix[k] + kOmegaSign * beta[k]) < 1e-9);
        CHECK(std::abs(iy[k] - kOmegaSign * alpha[k]) < 1e-9);
      }
    }
  }
}

TEST_CASE("Darboux reports") {
  for (const auto& name : lagrangian_names()) {
    CAPTURE(name);
    const auto r = darboux_check(lagrangian_make(name, {1.0, 1.0, 3}));
    CHECK(r.pass());
    if (name != "magnetic-general") CHECK(r.max_residual() < 1e-12);
  }
  DarbouxOptions strict;
  strict.tol = 1e-9;
  CHECK(darboux_check(lagrangian_make("magnetic-symmetric", {2.5}), strict).pass());
  CHECK(darboux_check(warped()).pass());
  CHECK_THROWS_AS(lagrangian_make("relativistic"), UnknownName);
}

TEST_CASE("magnetic chart is a symplectomorphism") {
  for (const auto& a : {VectorPotential::symmetric({0.2, -0.5, 1.4}), VectorPotential::general()}) {
    CAPTURE(a.name);
    const auto l = magnetic_lagrangian(a);
    const auto chart = magnetic_chart(a);
    const auto pulled = geometry::pullback(chart.forward, 6, geometry::TwoForm::canonical(3));
    for (const auto& x : points(6, 50, 7)) CHECK(max_abs(pulled.at(x) - symplectic_form(l).at(x)) < 1e-10);
  }
  const auto id = magnetic_chart(VectorPotential::zero());
  for (const auto& x : points(6, 10, 8)) CHECK(max_diff(id.to_manifold(x), x) == 0.0);
}

TEST_CASE("pushed-forward Liouville field matches its closed form") {
  for (const auto& a : {VectorPotential::symmetric({0.0, 0.0, 1.0}), VectorPotential::general()}) {
    CAPTURE(a.name);
    const auto push = geometry::pushforward(magnetic_chart(a), geometry::VectorField::liouville(6));
    const auto closed = magnetic_liouville(a);
    for (const auto& x : points(6, 50, 9)) CHECK(max_diff(push.at(x), closed.at(x)) < 1e-12);
  }
}

TEST_CASE("gauge shifts change the linear structure but not the symplectic form") {
  const auto a = VectorPotential::symmetric({0.0, 0.0, 1.0});
  const auto shifted = VectorPotential::gauge_shift(a, chi_cubic());
  CHECK(darboux_check(magnetic_lagrangian(shifted)).pass());

  const auto ca = magnetic_chart(a);
  const auto cs = magnetic_chart(shifted);
  const Matrix canon = geometry::TwoForm::canonical(3).at(Point(6, 0.0));
  const auto wa = geometry::pullback(ca.inverse, 6, symplectic_form(magnetic_lagrangian(a)));
  const auto ws = geometry::pullback(cs.inverse, 6, symplectic_form(magnetic_lagrangian(shifted)));
  double liouville_gap = 0.0;
  const auto da = geometry::pushforward(ca, geometry::VectorField::liouville(6));
  const auto ds = geometry::pushforward(cs, geometry::VectorField::liouville(6));
  for (const auto& y : points(6, 50, 10)) {
    CHECK(max_abs(wa.at(y) - canon) < 1e-9);
    CHECK(max_abs(ws.at(y) - canon) < 1e-9);
    liouville_gap = std::max(liouville_gap, max_diff(da.at(y), ds.at(y)));
  }
  CHECK(liouville_gap > 0.1);

  // A gradient that is itself linear (chi = q1 q2) leaves the dilation field alone.
  const auto linear_grad =
      VectorPotential::gauge_shift(a, [](std::span<const Jet> q) { return q[0] * q[1]; });
  const auto dl = geometry::pushforward(magnetic_chart(linear_grad), geometry::VectorField::liouville(6));
  for (const auto& y : points(6, 20, 11)) CHECK(max_diff(dl.at(y), da.at(y)) < 1e-12);
}

TEST_CASE("Darboux check is the same serial and parallel") {
  DarbouxOptions opt;
  opt.samples = 30;
  opt.exec = Execution::kSerial;
  const auto s = darboux_check(lagrangian_make("magnetic-general"), opt);
  opt.exec = Execution::kParallel;
  const auto p = darboux_check(lagrangian_make("magnetic-general"), opt);
  REQUIRE(s.checks.size() == p.checks.size());
  for (std::size_t i = 0; i < s.checks.size(); ++i) CHECK(s.checks[i].residual == p.checks[i].residual);
}
