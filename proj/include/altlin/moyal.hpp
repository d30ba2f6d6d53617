#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "altlin/diffeomorphism.hpp"
#include "altlin/numcore.hpp"
#include "altlin/report.hpp"

namespace altlin::moyal {

using numcore::Jet;
using numcore::Point;
using numcore::ScalarField;
using Complex = std::complex<double>;

/// Truncation of the star series in powers of hbar. order <= 3 so every
/// term fits the jet cap with at least one spare order for the result.
struct StarConfig {
  double hbar = 1.0;
  int order = 3;
  void validate() const;  // invalid_argument for hbar <= 0, JetOrderError for order out of [0, 3]
};

struct ComplexJet {
  Jet re;
  Jet im;
};
/// Complex function on the plane (q, p), evaluable on jets.
using ComplexField = std::function<ComplexJet(std::span<const Jet>)>;

ComplexField complexify(ScalarField f);
Complex evaluate(const ComplexField& f, const Point& x);

/// sum_{k <= order} (i hbar / 2)^k / k! P^k(f, g), where
/// P^k(f, g) = sum_j C(k, j) (-1)^j (d_q^{k-j} d_p^j f)(d_q^j d_p^{k-j} g).
/// The result is itself a ComplexField, so products nest while the jet
/// budget lasts.
ComplexField star_product(ComplexField f, ComplexField g, const StarConfig& cfg);
ComplexField star_product(ScalarField f, ScalarField g, const StarConfig& cfg);

/// (f * g - g * f) / (i hbar): the odd terms of the series. Written as an
/// explicit antisymmetrization so swapping f and g flips the sign bitwise.
ScalarField moyal_bracket(ScalarField f, ScalarField g, const StarConfig& cfg);
/// d_q f d_p g - d_p f d_q g.
ScalarField poisson_bracket(ScalarField f, ScalarField g);

/// f o phi.forward: a function of the manifold read in model coordinates.
ScalarField in_chart(ScalarField f, const linstruct::Diffeomorphism& phi);

/// At each manifold point (q, p): {f, g} in (q, p), {f, g}_K computed in
/// (Q, P) = phi^{-1}(q, p) for the ho_K structure, and D = det of the
/// Jacobian of (Q, P) -> (q, p). Check "fg_scaling_residual" is
/// max |{f, g}_K - D {f, g}|.
Report bracket_scaling_check(const ScalarField& f, const ScalarField& g, double lambda,
                             const std::vector<Point>& points, double tol);

struct SweepPoint {
  double hbar = 0.0;
  double deviation = 0.0;
};
struct Sweep {
  std::vector<SweepPoint> points;
  double slope = 0.0;  // least-squares slope of log deviation vs log hbar
};
/// |{f, g}_M - {f, g}| at x for each hbar. With lambda set, both brackets are
/// taken in the ho_K chart and compared against D {f, g}.
Sweep moyal_sweep(const ScalarField& f, const ScalarField& g, const Point& x, const std::vector<double>& hbars,
                  int order = 3, std::optional<double> lambda = std::nullopt);
/// n values log-spaced over [lo, hi].
std::vector<double> log_space(double lo, double hi, int n);
double loglog_slope(const std::vector<SweepPoint>& pts);

struct MoyalSuiteOptions {
  double hbar = 1.0;
  double lambda = 0.1;
  int points = 100;
  std::uint64_t seed = 13;
  double tol = 1e-9;
  double hbar_lo = 1e-3;
  double hbar_hi = 1e-1;
  int sweep_points = 9;
};
/// q * p, {q^2, p^2}_M, {q^3, p^3}_M at order 3, antisymmetry, the hbar^2
/// slope and the ho_K bracket scaling for f, g in {q, p, q^2 + p^2}.
Report moyal_suite(const MoyalSuiteOptions& opt = {});

/// Named test functions on the plane: q, p, q2, p2, q3, p3, qp, r2 (q^2 + p^2).
ScalarField named_function(const std::string& name);
std::vector<std::string> function_names();

}  // namespace altlin::moyal
