#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "altlin/geometry.hpp"
#include "altlin/numcore.hpp"
#include "altlin/parallel.hpp"
#include "altlin/potential.hpp"
#include "altlin/report.hpp"

namespace altlin::dynamics {

using geometry::VectorField;
using numcore::Matrix;
using numcore::ScalarField;
using numcore::Vector;
using Vector4 = Eigen::Vector4d;

/// u^i d/dq^i + (u x B)^i d/du^i on (q, u) in R^6, constant B.
VectorField gamma_magnetic(const Eigen::Vector3d& b);
/// Same with B = curl A evaluated pointwise.
VectorField gamma_lorentz(const VectorPotential& a);
/// 1/2 |u|^2 on (q, u).
ScalarField kinetic_energy();

/// Linear flow of the planar charged particle in (Q1, Q2, U1, U2).
struct PhaseFlow {
  double B = 0.0;
  Matrix G;
  Matrix Omega_D;
  std::function<Matrix(double)> F;   // propagator
  std::function<Matrix(double)> dF;  // its time derivative
};

/// Generator with rows (0, B/2, 1, 0), (-B/2, 0, 0, 1), (-B^2/4, 0, 0, B/2),
/// (0, -B^2/4, -B/2, 0), and the closed-form trigonometric propagator.
PhaseFlow flow_generator(double b);
/// Same generator, propagator from mat_exp(tG).
PhaseFlow flow_from_generator(const Matrix& g, double b);

struct SymplecticCheckOptions {
  double tol = 1e-11;
  std::vector<double> times;  // empty: 0.1, 0.2, ..., 10
};
/// Residuals of G^T Omega_D + Omega_D G (exact zero expected) and
/// F^T Omega_D F - Omega_D over sampled t.
Report generator_symplectic_check(const PhaseFlow& flow, const SymplecticCheckOptions& opt = {});

struct MotionConstants {
  double chi1 = 0.0;
  double chi2 = 0.0;
};
/// chi1 = U1 - B/2 Q2, chi2 = U2 + B/2 Q1 for state (Q1, Q2, U1, U2).
MotionConstants constants_chi(double b, const Vector4& state);

struct OrbitPoint {
  double t = 0.0;
  Eigen::Vector2d center;
  Eigen::Vector2d q_tilde;  // rotating part
  Eigen::Vector2d q;        // center + q_tilde
};
/// Position split into the fixed center (chi2/B, -chi1/B) and a circle of
/// angular frequency B. Throws std::invalid_argument for B = 0.
std::vector<OrbitPoint> larmor_orbit(double b, const Vector4& state, const std::vector<double>& t_grid);

/// Gamma pushed to (Q, U) = (q, u + A(q)):
/// (U - A)^i d/dQ^i + (U^k - A^k) d_i A_k d/dU_i.
VectorField pushforward_gamma(const VectorPotential& a);
/// 1/2 |U - A(Q)|^2 on (Q, U).
ScalarField hamiltonian_tilde(const VectorPotential& a);

/// Planar field d/dt (Q, U) = G (Q, U) for the integrator.
numcore::Field planar_field(double b);
/// 1/2 |U - A(Q)|^2 in the planar symmetric gauge.
double planar_energy(double b, const Vector4& state);

struct TrajectoryRow {
  double t, Q1, Q2, U1, U2, chi1, chi2, H;
};
std::vector<TrajectoryRow> exact_trajectory(double b, const Vector4& state, const std::vector<double>& t_grid,
                                            Execution exec = Execution::kParallel);
std::vector<TrajectoryRow> rk4_planar_trajectory(double b, const Vector4& state, double t, int steps);

/// CSV with header t,Q1,Q2,U1,U2,chi1,chi2,H and shortest round-trip doubles.
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text);

struct PropagatorSuiteOptions {
  double span_periods = 0.0;  // 0: t in [0, 20/B] for the mat_exp comparison
  int rk4_steps = 10000;      // over one period
  double tol_exact = 1e-10;
  double tol_symplectic = 1e-11;
  double tol_rk4 = 1e-7;
  double min_rk4_order = 3.8;
};
/// Closed-form propagator against the generator: F(0), dF/dt at 0, mat_exp
/// agreement, F^-1 dF = G, group law, period, symplecticity, chi and energy
/// along exact and RK4 flows, RK4 order and the Larmor split.
Report propagator_suite(double b, const Vector4& state, const PropagatorSuiteOptions& opt = {});

struct GammaSuiteOptions {
  int samples = 100;
  std::uint64_t seed = 11;
  double box = 2.0;
  double tol = 1e-10;
  Execution exec = Execution::kParallel;
};
/// At seeded points of R^6: i_Gamma omega_L = dH, Gamma(|u|^2 / 2) = 0,
/// phi_* Gamma equal to pushforward_gamma(A), and i_Gamma~ dQ^dU = dH~.
Report gamma_suite(const VectorPotential& a, const GammaSuiteOptions& opt = {});

}  // namespace altlin::dynamics
