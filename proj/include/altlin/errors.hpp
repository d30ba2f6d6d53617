#pragma once

#include <stdexcept>
#include <string>

namespace altlin {

/// A function was evaluated outside the set where it is defined
/// (log of a non-positive number, a point outside a structure's manifold, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A derivative was requested where the map is only continuous.
class NotDifferentiable : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Jet order beyond kMaxJetOrder, or an operation that needs more orders
/// than the operands carry.
class JetOrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Velocity Hessian singular or too ill-conditioned at a point.
class DegenerateLagrangian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A shift or momentum that is not an integer multiple of the lattice quanta.
class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The fiducial vector is annihilated by a projector whose term is needed.
class OrthogonalFiducial : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace altlin
