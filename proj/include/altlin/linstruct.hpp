#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "altlin/diffeomorphism.hpp"
#include "altlin/geometry.hpp"
#include "altlin/numcore.hpp"
#include "altlin/parallel.hpp"
#include "altlin/potential.hpp"
#include "altlin/report.hpp"

namespace altlin::linstruct {

using numcore::Tolerance;

/// Vector-space operations on M transported from E through phi:
/// u + v = phi(phi^-1 u + phi^-1 v), a u = phi(a phi^-1 u).
/// Some catalog entries also carry closed-form rules; when present they are
/// used by ls_add / ls_scale and the transported rule stays available for
/// cross-checks.
struct LinearStructure {
  Diffeomorphism phi;
  std::function<Point(const Point&, const Point&)> add_rule;
  std::function<Point(double, const Point&)> scale_rule;
  std::function<Point(const Point&, const Point&)> sub_rule;

  const std::string& name() const { return phi.name; }
  int dim() const { return phi.dim; }
};

Point ls_add(const LinearStructure& l, const Point& u, const Point& v);
Point ls_scale(const LinearStructure& l, double lambda, const Point& u);
Point ls_origin(const LinearStructure& l);
/// Transported rules, ignoring any closed forms.
Point ls_add_generic(const LinearStructure& l, const Point& u, const Point& v);
Point ls_scale_generic(const LinearStructure& l, double lambda, const Point& u);
Point ls_sub_generic(const LinearStructure& l, const Point& u, const Point& v);

/// One-parameter dilation group Psi(u, t) = phi(e^t phi^-1 u).
Point ls_flow(const LinearStructure& l, const Point& u, double t);
/// d/dt Psi(u, t) at t = 0, exact through jets. Throws NotDifferentiable
/// where phi^-1 is not smooth.
Point ls_liouville(const LinearStructure& l, const Point& u);
/// The same field as phi_* of the linear Liouville field.
geometry::VectorField liouville_field(const LinearStructure& l);

struct AxiomOptions {
  int samples = 1000;
  Tolerance tol{1e-8, 0.0};
  std::uint64_t seed = 7;
  double scalar_lo = -2.0;
  double scalar_hi = 2.0;
  Execution exec = Execution::kParallel;
};

/// Max residuals of the vector-space axioms on seeded samples.
Report ls_axiom_report(const LinearStructure& l, const AxiomOptions& opt = {});

using PointMap = std::function<Point(const Point&)>;

struct LiouvilleOptions {
  int samples = 100;
  std::uint64_t seed = 5;
  double tol_pushforward = 1e-9;
  double tol_flow = 1e-6;
  double tol_closed = 1e-10;
  double fd_step = 1e-5;
  Execution exec = Execution::kParallel;
};
/// ls_liouville against phi_* of the linear Liouville field, against a
/// central difference of ls_flow at t = 0, and against `closed` when given.
/// Points where phi^-1 is not differentiable are skipped and noted.
Report liouville_report(const LinearStructure& l, const LiouvilleOptions& opt = {}, const PointMap& closed = {});

/// Seeded points of M drawn from phi's sample box and kept inside the chart.
std::vector<Point> sample_domain(const Diffeomorphism& phi, int count, std::uint64_t seed);

// Catalog.

struct CatalogParams {
  int n = 1;              // dimension for standard / tanh / exp / cube
  double lambda = 0.1;    // ho_K
  double B = 1.0;         // magnetic, constant field along q3
  std::string gauge = "symmetric";  // magnetic: symmetric | general
};

std::vector<std::string> catalog_names();
/// Throws UnknownName or std::invalid_argument.
LinearStructure catalog_make(const std::string& name, const CatalogParams& params = {});

/// Known closed form of the dilation field for a catalog entry, or empty.
PointMap liouville_closed_form(const std::string& name, const CatalogParams& params = {});

LinearStructure standard(int n);
/// phi(Q, P) = (Q, P)(1 + lambda R^2), inverse via K.
LinearStructure ho_K(double lambda);
/// phi(q, u) = (q, u + A(q)) on R^6.
LinearStructure magnetic(const VectorPotential& a);
LinearStructure tanh_structure(int n);
LinearStructure exp_structure(int n);
/// phi(x) = x^3: a homeomorphism only; phi^-1 is singular at 0.
LinearStructure cube_structure(int n);
/// Inverse stereographic projection, in the polar chart (theta, phi) of the
/// sphere without its north pole.
LinearStructure sphere();

/// (Q,U) -_phi (Q',U') = (Q - Q', U - U' + A(Q - Q') + A(Q') - A(Q)).
Point magnetic_sub(const LinearStructure& l, const Point& u, const Point& v);

/// ho_K sum written with the prefactor S(r, r') = 1 + lambda |K x + K' x'|^2.
Point ho_K_add_closed(double lambda, const Point& u, const Point& v);
/// Jacobian of (Q, P) -> (q, p) for ho_K.
numcore::Matrix ho_A(double lambda, double Q, double P);
/// d/dQ and d/dP expressed in (q, p) components.
std::pair<geometry::VectorField, geometry::VectorField> ho_basis_fields(double lambda);

/// Cartesian embedding of a polar sphere point.
Eigen::Vector3d sphere_embed(const Point& polar);
/// The dilation field in the R^3 embedding: (-x1 x3, -x2 x3, 1 - x3^2).
Eigen::Vector3d sphere_liouville_cartesian(const Eigen::Vector3d& x);
/// Scaling written in the R^3 embedding.
Eigen::Vector3d sphere_scale_cartesian(double lambda, const Eigen::Vector3d& x);

}  // namespace altlin::linstruct
