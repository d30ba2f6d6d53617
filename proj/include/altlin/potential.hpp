#pragma once

#include <Eigen/Dense>
#include <string>

#include "altlin/jet.hpp"

namespace altlin {

/// Vector potential A(q) on R^3, evaluated on jets. B = curl A.
struct VectorPotential {
  std::string name;
  numcore::JetMap field;  // q (3 jets) -> A (3 jets)

  std::vector<numcore::Jet> operator()(std::span<const numcore::Jet> q) const;
  Eigen::Vector3d at(const Eigen::Vector3d& q) const;
  /// curl A at q.
  Eigen::Vector3d curl(const Eigen::Vector3d& q) const;

  static VectorPotential zero();
  /// A = (B x q) / 2, the symmetric gauge for a constant field.
  static VectorPotential symmetric(const Eigen::Vector3d& b);
  /// A = (0, q1 q3, 0), giving the non-constant B = (-q1, 0, q3).
  static VectorPotential general();
  /// A + grad chi.
  static VectorPotential gauge_shift(const VectorPotential& a, const numcore::ScalarField& chi);
};

}  // namespace altlin
