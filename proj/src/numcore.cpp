#include "altlin/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "altlin/errors.hpp"

namespace altlin::numcore {

Tolerance::Tolerance(double abs_tol, double rel_tol) : abs(abs_tol), rel(rel_tol) {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");
  if (abs_tol == 0.0 && rel_tol == 0.0) throw std::invalid_argument("tolerance abs and rel cannot both be zero");
}

double Tolerance::bound(double a, double b) const { return abs + rel * std::max(std::abs(a), std::abs(b)); }

bool Tolerance::accepts(double a, double b) const { return std::abs(a - b) <= bound(a, b); }

Matrix mat_exp(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("mat_exp needs a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  const auto n = m.rows();
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (n == 0) return m;
  if (!std::isfinite(norm)) throw DomainError("mat_exp: non-finite entries");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix a = m / std::ldexp(1.0, squarings);

  // Each squaring roughly doubles the relative error, so the core carries
  // the tolerance divided by 2^s.
  const double target = std::ldexp(tol.abs, -squarings);
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < 64; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    const double t = term.cwiseAbs().rowwise().sum().maxCoeff();
    const double s = sum.cwiseAbs().rowwise().sum().maxCoeff();
    if (t <= std::max(target, tol.rel * s) * 1e-3 || t == 0.0) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

double solve_K(double lambda, double r) {
  if (!(lambda >= 0.0)) throw DomainError("solve_K needs lambda >= 0");
  if (!(r >= 0.0)) throw DomainError("solve_K needs r >= 0");
  const double c = lambda * r * r;
  if (c == 0.0) return 1.0;
  auto f = [c](double k) { return c * k * k * k + k - 1.0; };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double k = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double step = f(k) / (3.0 * c * k * k + 1.0);
    if (step == 0.0) break;
    k -= step;
  }
  return k;
}

Jet solve_K_jet(double lambda, const Jet& s) {
  const double s0 = s.value();
  if (!(s0 >= 0.0)) throw DomainError("solve_K_jet needs r^2 >= 0");
  const double k0 = solve_K(lambda, std::sqrt(s0));
  if (s.is_constant()) return Jet(k0);
  Jet k(s.layout(), k0);
  // Newton in jet arithmetic; each pass doubles the number of exact orders.
  for (int i = 0; i < 3; ++i) {
    const Jet k2 = k * k;
    const Jet f = lambda * s * k2 * k + k - 1.0;
    const Jet df = 3.0 * lambda * s * k2 + 1.0;
    k -= f / df;
  }
  return k;
}

Point rk4_flow(const Field& field, Point x0, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_flow needs steps >= 1");
  const double h = t / steps;
  const std::size_t n = x0.size();
  Point tmp(n);
  for (int s = 0; s < steps; ++s) {
    const Point k1 = field(x0);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + 0.5 * h * k1[i];
    const Point k2 = field(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + 0.5 * h * k2[i];
    const Point k3 = field(tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x0[i] + h * k3[i];
    const Point k4 = field(tmp);
    for (std::size_t i = 0; i < n; ++i) x0[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x0;
}

std::vector<Sample> rk4_trajectory(const Field& field, Point x0, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_trajectory needs steps >= 1");
  const double h = t / steps;
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, x0});
  for (int s = 1; s <= steps; ++s) {
    x0 = rk4_flow(field, std::move(x0), h, 1);
    out.push_back({s * h, x0});
  }
  return out;
}

Point fd_gradient(const std::function<double(const Point&)>& f, const Point& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_gradient needs h > 0");
  Point g(x.size());
  Point y = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double fp = f(y);
    y[i] = x[i] - h;
    const double fm = f(y);
    y[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Point fd_gradient(const ScalarField& f, const Point& x, double h) {
  return fd_gradient([&f](const Point& y) { return evaluate(f, y); }, x, h);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::vector<Point> sample_box(const Point& lo, const Point& hi, int count, std::uint64_t seed) {
  if (lo.size() != hi.size()) throw DimensionError("sample_box: bound dimensions differ");
  Rng rng(seed);
  std::vector<Point> out(static_cast<std::size_t>(std::max(count, 0)), Point(lo.size()));
  for (auto& p : out) {
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
  }
  return out;
}

}  // namespace altlin::numcore
