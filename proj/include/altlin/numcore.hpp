#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "altlin/jet.hpp"

namespace altlin::numcore {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Accepts |a - b| <= abs + rel * max(|a|, |b|).
struct Tolerance {
  double abs = 1e-12;
  double rel = 0.0;

  Tolerance() = default;
  Tolerance(double abs_tol, double rel_tol = 0.0);

  double bound(double a, double b) const;
  bool accepts(double a, double b) const;
};

/// Matrix exponential by scaling and squaring around a Taylor core.
Matrix mat_exp(const Matrix& m, const Tolerance& tol = {});

/// Root K in (0, 1] of lambda r^2 K^3 + K - 1 = 0.
double solve_K(double lambda, double r);
/// Same root as a jet in s = r^2, which keeps K smooth through r = 0.
Jet solve_K_jet(double lambda, const Jet& s);

using Field = std::function<Point(const Point&)>;

/// Classical RK4 with `steps` equal steps over [0, t].
Point rk4_flow(const Field& field, Point x0, double t, int steps);

struct Sample {
  double t;
  Point x;
};
/// RK4 states at every step (steps + 1 entries, including t = 0).
std::vector<Sample> rk4_trajectory(const Field& field, Point x0, double t, int steps);

/// Central differences per coordinate.
Point fd_gradient(const std::function<double(const Point&)>& f, const Point& x, double h);
Point fd_gradient(const ScalarField& f, const Point& x, double h);

/// Uniform doubles in [0, 1) from a 64-bit Mersenne twister; the mapping is
/// fixed so seeded runs match across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

/// Seeded points uniform over the box [lo, hi].
std::vector<Point> sample_box(const Point& lo, const Point& hi, int count, std::uint64_t seed);

}  // namespace altlin::numcore
