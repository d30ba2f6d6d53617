#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "altlin/diffeomorphism.hpp"
#include "altlin/geometry.hpp"
#include "altlin/parallel.hpp"
#include "altlin/potential.hpp"
#include "altlin/report.hpp"

namespace altlin::lagrangian {

using geometry::OneForm;
using geometry::TwoForm;
using geometry::VectorField;
using numcore::Matrix;
using numcore::Point;
using numcore::ScalarField;

/// Orientation of the Lagrangian two-form, omega_L = sign * d theta_L.
/// With -1 the second-order field of the magnetic example satisfies
/// i_Gamma omega_L = dH and the Lagrangian chart maps omega_L to the
/// canonical dq ^ du.
inline constexpr double kOmegaSign = -1.0;

/// Hessian condition numbers above this are treated as degenerate.
inline constexpr double kMaxHessianCondition = 1e8;

/// L(q, u) on TQ = R^2n, coordinates ordered (q^1..q^n, u^1..u^n).
struct Lagrangian {
  std::string name;
  int n = 0;
  ScalarField L;
  std::optional<VectorPotential> potential;  // set for magnetic Lagrangians

  int dim() const { return 2 * n; }
};

/// 1/2 |u|^2 - 1/2 k |q|^2.
Lagrangian standard_lagrangian(int n, double k = 1.0);
/// 1/2 |u|^2 + A(q).u on R^6.
Lagrangian magnetic_lagrangian(const VectorPotential& a);

struct LagrangianParams {
  double B = 1.0;
  double k = 1.0;
  int n = 3;
};
/// standard | magnetic-symmetric | magnetic-general.
Lagrangian lagrangian_make(const std::string& name, const LagrangianParams& params = {});
std::vector<std::string> lagrangian_names();

/// Velocity Hessian d^2L/du du at x.
Matrix hessian(const Lagrangian& l, const Point& x);
/// Throws DegenerateLagrangian when the Hessian is singular or its
/// condition number exceeds kMaxHessianCondition. Returns the condition.
double require_regular(const Lagrangian& l, const Point& x);

/// theta_L = (dL/du^i) dq^i.
OneForm cartan_form(const Lagrangian& l);
/// omega_L = sign * d theta_L; degenerate points throw.
TwoForm symplectic_form(const Lagrangian& l, double sign = kOmegaSign);
/// H = u^i dL/du^i - L.
ScalarField energy(const Lagrangian& l);

/// X_j, Y^j and their dual forms alpha^i = dq^i, beta_i = d(dL/du^i).
struct AdaptedFrame {
  std::vector<VectorField> X;
  std::vector<VectorField> Y;
  std::vector<OneForm> alpha;
  std::vector<OneForm> beta;
};
AdaptedFrame adapted_frame(const Lagrangian& l);

/// Frame values at a point: column j of X is X_j, column j of Y is Y^j
/// (2n components each); row i of alpha / beta is alpha^i / beta_i.
struct FrameValues {
  Matrix X, Y, alpha, beta;
};
FrameValues adapted_frame_at(const Lagrangian& l, const Point& x);

struct DarbouxOptions {
  int samples = 100;
  double tol = 1e-8;
  std::uint64_t seed = 11;
  double box = 2.0;  // samples uniform in [-box, box]^2n
  double sign = kOmegaSign;
  Execution exec = Execution::kParallel;
};

/// Max residuals of: pairwise brackets of {X_j, Y^j}, closedness of alpha and
/// beta, omega_L - sign beta_i ^ alpha^i, duality pairings and the defining
/// interior products i_X omega_L = -sign beta, i_Y omega_L = sign alpha.
Report darboux_check(const Lagrangian& l, const DarbouxOptions& opt = {});

/// (q, u) -> (Q, U) = (q, u + A(q)).
linstruct::Diffeomorphism magnetic_chart(const VectorPotential& a);
/// Closed form of the pushed-forward dilation field at (Q, U):
/// Q d/dQ + (U - A(Q) + Q^j dA/dQ^j) d/dU.
VectorField magnetic_liouville(const VectorPotential& a);

}  // namespace altlin::lagrangian
