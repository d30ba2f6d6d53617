#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "altlin/errors.hpp"
#include "altlin/quantize.hpp"

using namespace altlin;
using namespace altlin::quantize;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeState random_state(const LatticeGrid& g, std::uint64_t seed) {
  numcore::Rng rng(seed);
  LatticeState s(g);
  for (auto& a : s.amp) a = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return s;
}

double max_gap(const LatticeState& a, const LatticeState& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i) d = std::max(d, std::abs(a.amp[i] - b.amp[i]));
  return d;
}

}  // namespace

TEST_CASE("lattice grids are validated") {
  CHECK_THROWS_AS(LatticeGrid(48, 0.25, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeGrid(64, 0.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(LatticeGrid(64, 0.25, 0.0, 3), std::invalid_argument);
  const auto g = LatticeGrid::centered(64, 16.0, 2);
  CHECK(g.sites() == 64u * 64u);
  CHECK(g.h == 0.25);
  CHECK(g.momentum_quantum(1.0) == doctest::Approx(2 * kPi / 16));
}

TEST_CASE("Weyl operator special cases") {
  const auto g = LatticeGrid::centered(64, 16.0, 1);
  const double hbar = 0.7;
  const auto psi = gaussian_state(g, 1.3, 0.4, 0.9);

  // x = 0: multiplication by exp(-i pi Q / hbar)
  const LatticeShift phase{{0}, {3}};
  const auto wp = weyl_apply(phase, psi, hbar);
  const double pi3 = 3 * g.momentum_quantum(hbar);
  for (std::size_t j = 0; j < g.sites(); ++j) {
    const Complex expect = std::exp(Complex(0.0, -pi3 * g.coord(j, 0) / hbar)) * psi.amp[j];
    CHECK(std::abs(wp.amp[j] - expect) < 1e-14);
  }

  // pi = 0: translation with periodic wrap
  const LatticeShift shift{{5}, {0}};
  const auto ws = weyl_apply(shift, psi, hbar);
  for (std::size_t j = 0; j < g.sites(); ++j) CHECK(ws.amp[j] == psi.amp[(j + 5) % g.sites()]);

  CHECK_THROWS_AS(lattice_shift(g, {0.3}, {0.0}, hbar), LatticeError);
  CHECK_THROWS_AS(lattice_shift(g, {0.0}, {0.1}, hbar), LatticeError);
  const auto e = lattice_shift(g, {0.5}, {2 * g.momentum_quantum(hbar)}, hbar);
  CHECK(e.x_steps[0] == 2);
  CHECK(e.pi_quanta[0] == 2);
}

TEST_CASE("Weyl operators are unitary") {
  numcore::Rng rng(4);
  for (int d : {1, 2}) {
    const auto g = LatticeGrid::centered(d == 1 ? 64 : 32, 16.0, d);
    const auto psi = random_state(g, 9 + d);
    for (int k = 0; k < 20; ++k) {
      LatticeShift e;
      for (int a = 0; a < d; ++a) {
        e.x_steps.push_back(static_cast<long>(rng.uniform(-40, 40)));
        e.pi_quanta.push_back(static_cast<long>(rng.uniform(-40, 40)));
      }
      CHECK(std::abs(weyl_apply(e, psi, 1.0).norm() - psi.norm()) < 1e-12 * psi.norm());
    }
  }
}

TEST_CASE("exchange phase of the discrete Heisenberg pair") {
  const int n = 64;
  const auto g = LatticeGrid::centered(n, 16.0, 1);
  const LatticeShift e1{{1}, {0}}, e2{{0}, {1}};
  const Complex measured = weyl_commutation_check(e1, e2, g, 1.0);
  const Complex expect = std::exp(Complex(0.0, -2 * kPi / n));
  CHECK(std::abs(measured - expect) < 1e-12);
  CHECK(std::abs(measured - weyl_phase_expected(g, e1, e2, 1.0)) < 1e-12);
  CHECK(std::abs(weyl_commutation_check(e2, e1, g, 1.0) - std::conj(measured)) < 1e-12);
  CHECK(std::abs(weyl_commutation_check(e1, {{0}, {0}}, g, 1.0) - 1.0) < 1e-14);

  // the opposite orientation is the conjugate prediction
  const Complex flipped = weyl_phase_expected(g, e1, e2, 1.0, WeylConvention{+1.0});
  CHECK(std::abs(flipped - std::conj(measured)) < 1e-12);
}

TEST_CASE("exchange phases for random 2D pairs match omega") {
  const auto g = LatticeGrid::centered(64, 16.0, 2);
  numcore::Rng rng(7);
  for (int k = 0; k < 50; ++k) {
    LatticeShift e1, e2;
    for (int a = 0; a < 2; ++a) {
      e1.x_steps.push_back(static_cast<long>(rng.uniform(-20, 20)));
      e1.pi_quanta.push_back(static_cast<long>(rng.uniform(-20, 20)));
      e2.x_steps.push_back(static_cast<long>(rng.uniform(-20, 20)));
      e2.pi_quanta.push_back(static_cast<long>(rng.uniform(-20, 20)));
    }
    const Complex measured = weyl_commutation_check(e1, e2, g, 1.0);
    CHECK(std::abs(measured - weyl_phase_expected(g, e1, e2, 1.0)) < 1e-11);
  }
}

TEST_CASE("Heisenberg evolution") {
  const double b = 1.2;
  const Vector4 xi(0.3, -0.5, 1.1, 0.2), eta(-0.7, 0.4, 0.0, 0.9);
  CHECK((heisenberg_evolve(xi, 0.0, b) - xi).cwiseAbs().maxCoeff() == 0.0);
  CHECK((heisenberg_evolve(xi, 2 * kPi / b, b) - xi).cwiseAbs().maxCoeff() < 1e-12);
  const double w0 = symplectic_product(xi, eta);
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    CHECK(std::abs(symplectic_product(heisenberg_evolve(xi, t, b), heisenberg_evolve(eta, t, b)) - w0) < 1e-11);
  }
}

TEST_CASE("operator evolution rows against the textbook display") {
  for (double t : {0.0, 0.4, 1.7, 5.0}) {
    const Matrix m = operator_evolution(t, 0.9);
    const Matrix shown = displayed_operator_evolution(t, 0.9);
    CHECK((m.topRows(2) - shown.topRows(2)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m.bottomRows(2) + shown.bottomRows(2)).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK((operator_evolution(0.0, 0.9) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Hamiltonian commutators converge at second order") {
  for (double b : {0.0, 1.0}) {
    CAPTURE(b);
    const auto r = hamiltonian_comm_check(b, LatticeGrid::centered(64, 16.0, 2), 1.0);
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CAPTURE(c.note);
      CHECK(c.pass);
    }
    CHECK(r.find("U1_H_order_deficit") != nullptr);
    CHECK(r.find("Q_U_canonical_residual") != nullptr);
  }
}

TEST_CASE("measure norms") {
  auto gauss = [](double sigma) { return [sigma](double q) { return std::exp(-q * q / (2 * sigma * sigma)); }; };
  for (double s : {0.5, 1.0, 2.0}) {
    CHECK(measure_norm(gauss(s), 0.0, Measure::kMu) == measure_norm(gauss(s), 0.0, Measure::kMuPrime));
    CHECK(std::isfinite(measure_norm(gauss(s), 0.1, Measure::kMuPrime)));
  }
  // frozen quadrature values on the default grid
  const auto rows = norm_ratio_table(0.1, {0.5, 1.0, 2.0});
  CHECK(rows[0].ratio == doctest::Approx(1.0186).epsilon(1e-4));
  CHECK(rows[1].ratio == doctest::Approx(1.0724).epsilon(1e-4));
  CHECK(rows[2].ratio == doctest::Approx(1.2642).epsilon(1e-4));
  CHECK(norm_ratio_report(0.1).pass());
  CHECK(norm_ratio_report(0.0).pass());
  CHECK_THROWS_AS(measure_norm(gauss(1.0), -0.1, Measure::kMu), DomainError);
}

TEST_CASE("ladder operators") {
  for (double lambda : {0.0, 0.1}) {
    CAPTURE(lambda);
    const auto r = ladder_suite(lambda, 1.0, LatticeGrid::centered(256, 16.0, 1));
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
  }
  // O(h^2): halving h cuts the ground-state residual by about four
  const auto coarse = ladder_suite(0.1, 1.0, LatticeGrid::centered(128, 16.0, 1));
  const auto fine = ladder_suite(0.1, 1.0, LatticeGrid::centered(256, 16.0, 1));
  const double ratio = coarse.find("creation_on_ground")->residual / fine.find("creation_on_ground")->residual;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  CHECK_THROWS_AS(ladder_apply(Ladder::kCreation, LatticeState(LatticeGrid::centered(8, 4.0, 2)), 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("pure-state composition") {
  CHECK(pure_state_suite().pass());
  StateVector e0 = StateVector::Zero(3), e1 = StateVector::Zero(3);
  e0(0) = 1.0;
  e1(1) = 1.0;
  CHECK_THROWS_AS(pure_state_compose(projector(e1), projector(e0), 1.0, 0.0, e0), OrthogonalFiducial);
  // a zero coefficient makes the orthogonal term irrelevant
  const auto rho = pure_state_compose(projector(e0), projector(e1), 1.0, 0.0, e0);
  CHECK((rho - projector(e0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(purity_residual(rho) == 0.0);
}

TEST_CASE("state CSV round-trips bit for bit") {
  const auto g = LatticeGrid::centered(32, 8.0, 1);
  const auto psi = gaussian_state(g, 0.9, -0.3, 1.7);
  const std::string csv = state_csv(psi);
  CHECK(csv.rfind("index,re,im\n0,", 0) == 0);
  const auto back = parse_state_csv(csv, g);
  CHECK(max_gap(back, psi) == 0.0);
  CHECK(state_csv(back) == csv);
  CHECK_THROWS_AS(parse_state_csv(csv, LatticeGrid::centered(64, 8.0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_csv("index,re,im\n1,0,0\n", g), std::invalid_argument);
}
