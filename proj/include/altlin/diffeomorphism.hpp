#pragma once

#include <functional>
#include <string>

#include "altlin/jet.hpp"

namespace altlin::linstruct {

using numcore::JetMap;
using numcore::Point;

/// Smooth invertible map phi from a model vector space E onto a chart of a
/// manifold M. `forward` is phi, `inverse` is phi^-1; both act on jets so
/// derivatives of any order up to the jet cap come for free.
struct Diffeomorphism {
  std::string name;
  int dim = 0;
  JetMap forward;
  JetMap inverse;
  /// Membership of a point of M in phi(E). Empty means everything.
  std::function<bool(const Point&)> contains;
  /// Points of M where phi^-1 is differentiable. Empty means everywhere.
  std::function<bool(const Point&)> regular;
  /// Metric on M used by residuals. Empty means max-abs difference.
  std::function<double(const Point&, const Point&)> distance;
  /// Box in M coordinates used by samplers (intersected with `contains`).
  Point sample_lo;
  Point sample_hi;

  bool in_domain(const Point& m) const { return !contains || contains(m); }
  bool is_regular(const Point& m) const { return !regular || regular(m); }
  double dist(const Point& a, const Point& b) const;

  /// phi^-1(m); throws DomainError outside the chart.
  Point to_model(const Point& m) const;
  /// phi(e); throws DomainError if the image leaves the chart.
  Point to_manifold(const Point& e) const;

  /// `outer` after this map: E -> M -> M'.
  Diffeomorphism then(const Diffeomorphism& outer) const;

  static Diffeomorphism identity(int dim);
};

}  // namespace altlin::linstruct
