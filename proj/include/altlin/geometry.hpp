#pragma once

#include <functional>
#include <span>
#include <vector>

#include "altlin/diffeomorphism.hpp"
#include "altlin/jet.hpp"
#include "altlin/numcore.hpp"

namespace altlin::geometry {

using numcore::Jet;
using numcore::JetMap;
using numcore::JetMatrix;
using numcore::Matrix;
using numcore::Point;
using numcore::ScalarField;
using numcore::Vector;

using MatrixField = std::function<JetMatrix(std::span<const Jet>)>;

/// Vector field X = X^i d/dx^i on a chart of R^dim.
struct VectorField {
  int dim = 0;
  JetMap components;

  std::vector<Jet> operator()(std::span<const Jet> x) const;
  Point at(const Point& x) const;

  static VectorField constant(const Vector& v);
  static VectorField zero(int dim);
  /// The linear Liouville field x^i d/dx^i.
  static VectorField liouville(int dim);
};

/// One-form alpha = alpha_i dx^i.
struct OneForm {
  int dim = 0;
  JetMap components;

  std::vector<Jet> operator()(std::span<const Jet> x) const;
  Point at(const Point& x) const;

  static OneForm constant(const Vector& a);
};

/// Two-form, stored as omega_ij = omega(d_i, d_j). Antisymmetric.
struct TwoForm {
  int dim = 0;
  MatrixField components;

  JetMatrix operator()(std::span<const Jet> x) const;
  Matrix at(const Point& x) const;

  static TwoForm constant(const Matrix& m);
  /// sum_i dx^i ^ dx^{n+i} on R^2n, i.e. [[0, I], [-I, 0]].
  static TwoForm canonical(int n);
};

/// Symmetric (0,2) tensor g_ij.
struct BilinearForm {
  int dim = 0;
  MatrixField components;

  Matrix at(const Point& x) const;
};

/// (1,1) tensor S with S^i_j in row i, column j, so (S X)^i = S^i_j X^j.
struct OneOneTensor {
  int dim = 0;
  MatrixField components;

  JetMatrix operator()(std::span<const Jet> x) const;
  Matrix at(const Point& x) const;

  static OneOneTensor constant(const Matrix& m);
  static OneOneTensor identity(int n);
  /// [[0, I], [-I, 0]] on R^2n: J(d/dq) = -d/dp, J(d/dp) = d/dq.
  static OneOneTensor complex_structure(int n);
};

/// (phi_* X)(y) = D phi(phi^-1 y) X(phi^-1 y).
VectorField pushforward(const linstruct::Diffeomorphism& phi, const VectorField& x);
/// Jacobian of a map at a point.
Matrix jacobian(const JetMap& f, const Point& x);
/// (F^* omega)(x) = DF(x)^T omega(F(x)) DF(x).
TwoForm pullback(const JetMap& f, int dim, const TwoForm& omega);

VectorField lie_bracket(const VectorField& x, const VectorField& y);
OneForm differential(const ScalarField& f, int dim);
TwoForm exterior_d(const OneForm& alpha);
OneForm interior_product(const VectorField& x, const TwoForm& omega);
/// (d_S f)_i = (d_j f) S^j_i.
OneForm d_S(const ScalarField& f, const OneOneTensor& s);
/// X(f) = X^i d_i f.
ScalarField lie_derivative(const VectorField& x, const ScalarField& f);
ScalarField apply(const OneForm& alpha, const VectorField& x);
TwoForm wedge(const OneForm& a, const OneForm& b);
/// S applied to a vector field.
VectorField apply(const OneOneTensor& s, const VectorField& x);
/// g(X, Y) = omega(J X, Y), g_ij = J^k_i omega_kj.
BilinearForm compose_J_omega(const OneOneTensor& j, const TwoForm& omega);

/// Nijenhuis check restricted to constant tensors: returns the largest first
/// derivative of any component over `points`. Zero means S is constant and
/// its Nijenhuis tensor vanishes identically; anything else is out of scope.
double nijenhuis_constant_residual(const OneOneTensor& s, std::span<const Point> points);

/// Max-abs entry of (omega + omega^T) at x.
double antisymmetry_residual(const TwoForm& omega, const Point& x);

}  // namespace altlin::geometry
