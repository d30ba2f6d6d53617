#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "altlin/numcore.hpp"
#include "altlin/report.hpp"

namespace altlin::quantize {

using Complex = std::complex<double>;
using numcore::Matrix;
using Vector4 = Eigen::Vector4d;

/// Periodic lattice of n points per axis, site j at offset + j h.
struct LatticeGrid {
  int n = 64;
  double h = 0.25;
  double offset = -8.0;
  int d = 1;

  LatticeGrid() = default;
  /// Throws std::invalid_argument unless n is a power of two >= 2, h > 0
  /// and d is 1 or 2.
  LatticeGrid(int n_points, double spacing, double origin, int dim);
  /// Box of side length centered at 0.
  static LatticeGrid centered(int n_points, double length, int dim);

  std::size_t sites() const;
  double length() const { return n * h; }
  /// Coordinate along axis a of flat site s (axis 0 varies slowest).
  double coord(std::size_t s, int a) const;
  double momentum_quantum(double hbar) const;
  double cell() const;  // h^d
};

struct LatticeState {
  LatticeGrid grid;
  std::vector<Complex> amp;
  std::vector<double> weights;  // measure weight per site, 1 for Lebesgue

  explicit LatticeState(const LatticeGrid& g);
  /// sqrt(sum w |psi|^2 h^d), summed in site order.
  double norm() const;
  Complex inner(const LatticeState& other) const;  // <this, other>
};

/// Samples f(Q) on the grid with unit weights.
LatticeState sample_state(const LatticeGrid& g, const std::function<Complex(const double* q)>& f);
/// Gaussian of width sigma at center c (all axes), with a small momentum
/// kick k so the phase is not constant.
LatticeState gaussian_state(const LatticeGrid& g, double sigma, double center = 0.0, double k = 0.0);

/// One "index,re,im" line per site under that header, shortest round-trip
/// doubles. Weights are not stored.
std::string state_csv(const LatticeState& psi);
/// Reads state_csv output onto g with unit weights. Throws
/// std::invalid_argument on malformed rows, out-of-order indices or a site
/// count that does not match g.
LatticeState parse_state_csv(const std::string& text, const LatticeGrid& g);

/// Phase-space displacement e = (x, pi); x in lattice steps, pi in
/// momentum quanta, one entry per axis.
struct LatticeShift {
  std::vector<long> x_steps;
  std::vector<long> pi_quanta;
};
/// Converts real (x, pi) to lattice units; LatticeError when either is not
/// an integer multiple (relative tolerance 1e-9).
LatticeShift lattice_shift(const LatticeGrid& g, const std::vector<double>& x, const std::vector<double>& pi,
                           double hbar);

/// (W psi)(Q) = exp{-(i/hbar) pi.(Q + x/2)} psi(Q + x), periodic wrap.
LatticeState weyl_apply(const LatticeShift& e, const LatticeState& psi, double hbar);
LatticeState weyl_apply(const std::vector<double>& x, const std::vector<double>& pi, const LatticeState& psi,
                        double hbar);

/// Sign of the symplectic form entering the exchange relation
/// W(e1) W(e2) = exp(i omega(e1, e2) / hbar) W(e2) W(e1), with
/// omega(e1, e2) = sign * (x1.pi2 - x2.pi1). The operator above
/// produces sign = -1.
struct WeylConvention {
  double sign = -1.0;
};
double weyl_omega(const LatticeGrid& g, const LatticeShift& e1, const LatticeShift& e2, double hbar,
                  const WeylConvention& conv = {});
Complex weyl_phase_expected(const LatticeGrid& g, const LatticeShift& e1, const LatticeShift& e2, double hbar,
                            const WeylConvention& conv = {});
/// Measured (W1 W2 psi) / (W2 W1 psi) on a generic Gaussian, as
/// sum a conj(b) / sum |b|^2.
Complex weyl_commutation_check(const LatticeShift& e1, const LatticeShift& e2, const LatticeGrid& g, double hbar);

/// xi(t) = F(t) xi for xi = (x1, x2, pi1, pi2).
Vector4 heisenberg_evolve(const Vector4& e, double t, double b);
double symplectic_product(const Vector4& a, const Vector4& b);
/// g F(t)^T g with g = diag(1, 1, -1, -1): row k gives the k-th entry of
/// (U1, U2, Q1, Q2)(t) in the basis (U1, U2, Q1, Q2).
Matrix operator_evolution(double t, double b);
/// The same four rows as printed in the usual textbook display, where the
/// position rows carry the opposite overall sign.
Matrix displayed_operator_evolution(double t, double b);

struct CommutatorOptions {
  double band_radius = 4.0;  // residuals measured where |Q - center| <= radius
  std::vector<double> widths{1.0, 1.4};
  double min_order = 1.8;
};
/// Central-difference U = -i hbar grad, Q multiplication and
/// H = 1/2 {(U1 + B/2 Q2)^2 + (U2 - B/2 Q1)^2} on a 2D grid. Residuals of
///   (i/hbar)[U1, H] + (B/2)(U2 - B/2 Q1),  (i/hbar)[U2, H] - (B/2)(U1 + B/2 Q2),
///   (i/hbar)[Q1, H] + (U1 + B/2 Q2),       (i/hbar)[Q2, H] + (U2 - B/2 Q1),
/// and [Q^i, U^j] - i hbar delta, on grid and on the grid refined twice
/// over the same box; observed orders must reach min_order.
Report hamiltonian_comm_check(double b, const LatticeGrid& grid, double hbar, const CommutatorOptions& opt = {});

/// Which measure a norm is taken in: dq on the first Lagrangian subspace or
/// dQ on the second, dq = (1 + 3 lambda Q^2) dQ.
enum class Measure { kMu, kMuPrime };
struct NormGrid {
  double lo = -20.0;
  double hi = 20.0;
  double h = 0.02;
};
/// Squared-amplitude quadrature of psi(Q) with Q = q K(lambda, |q|) over a
/// q grid; returns the norm (square root).
double measure_norm(const std::function<double(double)>& psi, double lambda, Measure which,
                    const NormGrid& grid = {});

enum class Ladder { kCreation, kAnnihilation, kCreationPrime };
/// a^dagger = (q - hbar d/dq) / sqrt(2 hbar), a = (q + hbar d/dq) / sqrt(2 hbar),
/// A'^dagger = (K q - hbar (1 + 3 lambda K^2 q^2) d/dq) / sqrt(2 hbar) with
/// K = K(lambda, |q|). 1D grid, central differences, periodic wrap.
LatticeState ladder_apply(Ladder which, const LatticeState& psi, double lambda, double hbar);

using DensityMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
/// |psi><psi| / <psi|psi>.
DensityMatrix projector(const StateVector& psi);
/// rho = |psi><psi| / <psi|psi> with psi = c1 rho1 psi0 + c2 rho2 psi0.
/// OrthogonalFiducial when a term with nonzero coefficient vanishes or
/// the combination is zero.
DensityMatrix pure_state_compose(const DensityMatrix& rho1, const DensityMatrix& rho2, Complex c1, Complex c2,
                                 const StateVector& psi0);
/// max |rho^2 - rho|, |tr rho - 1| and |rho - rho^dagger|.
double purity_residual(const DensityMatrix& rho);

struct WeylSuiteOptions {
  int n = 64;
  double length = 16.0;
  double hbar = 1.0;
  int pairs = 50;
  std::uint64_t seed = 7;
  double tol_unitary = 1e-12;
  double tol_phase = 1e-11;
  double tol_symplectic = 1e-11;
  double B = 1.0;
};
/// Unitarity of random lattice-exact W(e) on 1D and 2D grids, the exchange
/// phase for seeded random pairs on the 2D grid, the single-quantum pair
/// of the 1D grid, and symplectic-product preservation under F(t).
Report weyl_suite(const WeylSuiteOptions& opt = {});

struct NormRow {
  double sigma = 0.0;
  double norm_mu = 0.0;
  double norm_mu_prime = 0.0;
  double ratio = 0.0;
};
/// Gaussian exp(-Q^2 / (2 sigma^2)) for each width.
std::vector<NormRow> norm_ratio_table(double lambda, const std::vector<double>& widths, const NormGrid& grid = {});
/// lambda = 0: ratios equal to 1e-10. lambda > 0: the first and last
/// widths give ratios that differ by more than 10%.
Report norm_ratio_report(double lambda, const std::vector<double>& widths = {0.5, 1.0, 2.0});

/// a^dagger on the ground profile, adjointness of a and a^dagger, and
/// A'^dagger against a^dagger at lambda = 0; tolerances scale with h^2.
Report ladder_suite(double lambda, double hbar, const LatticeGrid& grid);

/// Seeded random projectors, coefficients and fiducials in dims 2..max_dim,
/// the orthogonal-fiducial refusal and the phase dependence of the result.
Report pure_state_suite(int count = 100, int max_dim = 8, std::uint64_t seed = 3, double tol = 1e-12);

}  // namespace altlin::quantize
