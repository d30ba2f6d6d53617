#include "altlin/moyal.hpp"

#include <cmath>
#include <stdexcept>

#include "altlin/errors.hpp"
#include "altlin/linstruct.hpp"

namespace altlin::moyal {

using numcore::lift;

namespace {

constexpr int kMaxStarOrder = numcore::kMaxJetOrder - 1;

void require_plane(std::span<const Jet> x) {
  if (x.size() != 2) throw DimensionError("star products act on functions of (q, p)");
}

// d_q^a d_p^b, truncated to order m.
Jet partial(const Jet& f, int a, int b, int m) {
  Jet out = f;
  for (int i = 0; i < a; ++i) out = out.derivative(0);
  for (int i = 0; i < b; ++i) out = out.derivative(1);
  return out.truncate(m);
}

ComplexJet partial(const ComplexJet& f, int a, int b, int m) {
  return {partial(f.re, a, b, m), partial(f.im, a, b, m)};
}

ComplexJet mul(const ComplexJet& x, const ComplexJet& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// P^k(f, g) for jets of order m + k, result at order m.
ComplexJet bidiff(const ComplexJet& f, const ComplexJet& g, int k, int m) {
  ComplexJet acc{Jet(0.0), Jet(0.0)};
  for (int j = 0; j <= k; ++j) {
    const double c = binom(k, j) * (j % 2 ? -1.0 : 1.0);
    const ComplexJet t = mul(partial(f, k - j, j, m), partial(g, j, k - j, m));
    acc.re += c * t.re;
    acc.im += c * t.im;
  }
  return acc;
}

Jet bidiff(const Jet& f, const Jet& g, int k, int m) {
  Jet acc(0.0);
  for (int j = 0; j <= k; ++j) {
    const double c = binom(k, j) * (j % 2 ? -1.0 : 1.0);
    acc += c * (partial(f, k - j, j, m) * partial(g, j, k - j, m));
  }
  return acc;
}

// Odd part of the series divided by i hbar: sum over odd k of
// (i hbar)^(k-1) / (2^(k-1) k!) P^k(f, g), real for real f and g.
ScalarField odd_series(ScalarField f, ScalarField g, const StarConfig& cfg) {
  return [f, g, cfg](std::span<const Jet> x) {
    require_plane(x);
    const int top = cfg.order;
    return lift(x, top, [&](std::span<const Jet> local) {
             const int m = numcore::common_order(local) - top;
             const Jet fj = f(local);
             const Jet gj = g(local);
             Jet acc(0.0);
             for (int k = 1; k <= top; k += 2) {
               // (i)^(k-1) = (-1)^((k-1)/2)
               const double sign = ((k - 1) / 2) % 2 ? -1.0 : 1.0;
               const double c = sign * std::pow(cfg.hbar / 2.0, k - 1) / factorial(k);
               acc += c * bidiff(fj, gj, k, m);
             }
             return std::vector<Jet>{acc.truncate(m)};
           })
        .front();
  };
}

}  // namespace

void StarConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("hbar must be positive");
  if (order < 0 || order > kMaxStarOrder) {
    throw JetOrderError("star order " + std::to_string(order) + " exceeds the jet cap (max " +
                        std::to_string(kMaxStarOrder) + ")");
  }
}

ComplexField complexify(ScalarField f) {
  return [f](std::span<const Jet> x) { return ComplexJet{f(x), Jet(0.0)}; };
}

Complex evaluate(const ComplexField& f, const Point& x) {
  std::vector<Jet> c(x.begin(), x.end());
  const ComplexJet v = f(c);
  return {v.re.value(), v.im.value()};
}

ComplexField star_product(ComplexField f, ComplexField g, const StarConfig& cfg) {
  cfg.validate();
  return [f, g, cfg](std::span<const Jet> x) {
    require_plane(x);
    const int top = cfg.order;
    const auto out = lift(x, top, [&](std::span<const Jet> local) {
      const int m = numcore::common_order(local) - top;
      const ComplexJet fj = f(local);
      const ComplexJet gj = g(local);
      ComplexJet acc{Jet(0.0), Jet(0.0)};
      // (i hbar / 2)^k / k! cycles through 1, i, -1, -i
      for (int k = 0; k <= top; ++k) {
        const double mag = std::pow(cfg.hbar / 2.0, k) / factorial(k);
        const ComplexJet p = bidiff(fj, gj, k, m);
        switch (k % 4) {
          case 0: acc.re += mag * p.re; acc.im += mag * p.im; break;
          case 1: acc.re -= mag * p.im; acc.im += mag * p.re; break;
          case 2: acc.re -= mag * p.re; acc.im -= mag * p.im; break;
          default: acc.re += mag * p.im; acc.im -= mag * p.re; break;
        }
      }
      return std::vector<Jet>{acc.re.truncate(m), acc.im.truncate(m)};
    });
    return ComplexJet{out[0], out[1]};
  };
}

ComplexField star_product(ScalarField f, ScalarField g, const StarConfig& cfg) {
  return star_product(complexify(std::move(f)), complexify(std::move(g)), cfg);
}

ScalarField moyal_bracket(ScalarField f, ScalarField g, const StarConfig& cfg) {
  cfg.validate();
  const ScalarField fg = odd_series(f, g, cfg);
  const ScalarField gf = odd_series(g, f, cfg);
  return [fg, gf](std::span<const Jet> x) { return 0.5 * (fg(x) - gf(x)); };
}

ScalarField poisson_bracket(ScalarField f, ScalarField g) {
  return [f, g](std::span<const Jet> x) {
    require_plane(x);
    return lift(x, 1, [&](std::span<const Jet> local) {
             const int m = numcore::common_order(local) - 1;
             return std::vector<Jet>{bidiff(f(local), g(local), 1, m)};
           })
        .front();
  };
}

ScalarField in_chart(ScalarField f, const linstruct::Diffeomorphism& phi) {
  auto fwd = phi.forward;
  return [f, fwd](std::span<const Jet> x) {
    const auto y = fwd(x);
    return f(y);
  };
}

Report bracket_scaling_check(const ScalarField& f, const ScalarField& g, double lambda,
                             const std::vector<Point>& points, double tol) {
  const auto phi = linstruct::ho_K(lambda).phi;
  const ScalarField plain = poisson_bracket(f, g);
  const ScalarField chart = poisson_bracket(in_chart(f, phi), in_chart(g, phi));
  std::vector<double> res(points.size());
  double worst_d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point model = phi.to_model(points[i]);
    const double d = linstruct::ho_A(lambda, model[0], model[1]).determinant();
    res[i] = std::abs(numcore::evaluate(chart, model) - d * numcore::evaluate(plain, points[i]));
    worst_d = std::max(worst_d, std::abs(d - 1.0));
  }
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  Report r;
  r.add("fg_scaling_residual", worst, tol, "{f,g}_K - D {f,g}");
  r.info["lambda"] = std::to_string(lambda);
  r.info["points"] = std::to_string(points.size());
  r.info["max_abs_D_minus_1"] = std::to_string(worst_d);
  return r;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw std::invalid_argument("log_space: need 0 < lo < hi, n >= 2");
  std::vector<double> out;
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return out;
}

double loglog_slope(const std::vector<SweepPoint>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("slope needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    const double x = std::log(p.hbar);
    const double y = std::log(p.deviation);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Sweep moyal_sweep(const ScalarField& f, const ScalarField& g, const Point& x, const std::vector<double>& hbars,
                  int order, std::optional<double> lambda) {
  Sweep s;
  ScalarField ff = f, gg = g;
  Point at = x;
  double reference = 0.0;
  if (lambda) {
    const auto phi = linstruct::ho_K(*lambda).phi;
    ff = in_chart(f, phi);
    gg = in_chart(g, phi);
    at = phi.to_model(x);
    const double d = linstruct::ho_A(*lambda, at[0], at[1]).determinant();
    reference = d * numcore::evaluate(poisson_bracket(f, g), x);
  } else {
    reference = numcore::evaluate(poisson_bracket(f, g), x);
  }
  for (double hb : hbars) {
    const double m = numcore::evaluate(moyal_bracket(ff, gg, StarConfig{hb, order}), at);
    s.points.push_back({hb, std::abs(m - reference)});
  }
  s.slope = loglog_slope(s.points);
  return s;
}

ScalarField named_function(const std::string& name) {
  if (name == "q") return [](std::span<const Jet> x) { return x[0]; };
  if (name == "p") return [](std::span<const Jet> x) { return x[1]; };
  if (name == "q2") return [](std::span<const Jet> x) { return x[0] * x[0]; };
  if (name == "p2") return [](std::span<const Jet> x) { return x[1] * x[1]; };
  if (name == "q3") return [](std::span<const Jet> x) { return x[0] * x[0] * x[0]; };
  if (name == "p3") return [](std::span<const Jet> x) { return x[1] * x[1] * x[1]; };
  if (name == "qp") return [](std::span<const Jet> x) { return x[0] * x[1]; };
  if (name == "r2") return [](std::span<const Jet> x) { return x[0] * x[0] + x[1] * x[1]; };
  throw UnknownName("unknown function '" + name + "'");
}

std::vector<std::string> function_names() { return {"q", "p", "q2", "p2", "q3", "p3", "qp", "r2"}; }

Report moyal_suite(const MoyalSuiteOptions& opt) {
  const auto pts = numcore::sample_box({-2.0, -2.0}, {2.0, 2.0}, opt.points, opt.seed);
  const StarConfig cfg{opt.hbar, 3};
  const auto q = named_function("q"), p = named_function("p");
  const auto q2 = named_function("q2"), p2 = named_function("p2");
  const auto q3 = named_function("q3"), p3 = named_function("p3");
  const auto qp_star = star_product(q, p, cfg);
  const auto b22 = moyal_bracket(q2, p2, cfg);
  const auto b33 = moyal_bracket(q3, p3, cfg);
  const auto b33r = moyal_bracket(p3, q3, cfg);
  double r_qp = 0.0, r22 = 0.0, r33 = 0.0, anti = 0.0;
  for (const auto& x : pts) {
    const Complex s = evaluate(qp_star, x);
    r_qp = std::max(r_qp, std::abs(s - Complex(x[0] * x[1], opt.hbar / 2)));
    r22 = std::max(r22, std::abs(numcore::evaluate(b22, x) - 4 * x[0] * x[1]));
    const double want = 9 * x[0] * x[0] * x[1] * x[1] - 1.5 * opt.hbar * opt.hbar;
    r33 = std::max(r33, std::abs(numcore::evaluate(b33, x) - want));
    anti = std::max(anti, std::abs(numcore::evaluate(b33, x) + numcore::evaluate(b33r, x)));
  }
  Report r;
  r.add("q_star_p", r_qp, 1e-12, "q * p - qp - i hbar / 2");
  r.add("bracket_q2_p2", r22, 1e-12, "{q^2, p^2}_M - 4qp");
  r.add("bracket_q3_p3", r33, 1e-11, "{q^3, p^3}_M - 9 q^2 p^2 + 3/2 hbar^2");
  r.add("bracket_antisymmetry", anti, 0.0, "exact");

  const auto sweep = moyal_sweep(q3, p3, {0.7, -1.3}, log_space(opt.hbar_lo, opt.hbar_hi, opt.sweep_points));
  r.info["hbar_slope"] = std::to_string(sweep.slope);
  r.add("hbar_slope", std::abs(sweep.slope - 2.0), 0.05, "log-log slope of {q^3, p^3}_M - {q^3, p^3}");

  double scaling = 0.0;
  const auto chart_pts = numcore::sample_box({-1.5, -1.5}, {1.5, 1.5}, opt.points, opt.seed + 1);
  for (const char* fa : {"q", "p", "r2"}) {
    for (const char* fb : {"q", "p", "r2"}) {
      const auto rep = bracket_scaling_check(named_function(fa), named_function(fb), opt.lambda, chart_pts, opt.tol);
      scaling = std::max(scaling, rep.checks.front().residual);
    }
  }
  r.add("fg_scaling_residual", scaling, opt.tol, "f, g in {q, p, q^2 + p^2}");
  const auto chart_sweep =
      moyal_sweep(q3, p3, {0.7, -1.3}, log_space(opt.hbar_lo, opt.hbar_hi, opt.sweep_points), 3, opt.lambda);
  r.info["chart_hbar_slope"] = std::to_string(chart_sweep.slope);
  r.add("chart_hbar_slope", std::abs(chart_sweep.slope - 2.0), 0.05, "{f,g}_M in (Q, P) against D {f,g}");
  return r;
}

}  // namespace altlin::moyal
