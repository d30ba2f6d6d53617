#pragma once

// Test-side polynomial model of the star product. Polynomials in (q, p) are
// exponent-pair -> coefficient maps and the bidifferential series is summed
// in full, which terminates. Shares no code with the jet implementation.

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include "altlin/numcore.hpp"

namespace altlin::oracle {

using Complex = std::complex<double>;
using numcore::Point;

using Poly = std::map<std::pair<int, int>, Complex>;

inline Poly d(const Poly& f, int dq, int dp) {
  Poly out;
  for (const auto& [e, c] : f) {
    int i = e.first, j = e.second;
    if (i < dq || j < dp) continue;
    Complex k = c;
    for (int a = 0; a < dq; ++a) k *= static_cast<double>(i - a);
    for (int a = 0; a < dp; ++a) k *= static_cast<double>(j - a);
    out[{i - dq, j - dp}] += k;
  }
  return out;
}

inline Poly mul(const Poly& f, const Poly& g) {
  Poly out;
  for (const auto& [a, ca] : f)
    for (const auto& [b, cb] : g) out[{a.first + b.first, a.second + b.second}] += ca * cb;
  return out;
}

inline Poly add(Poly f, const Poly& g, Complex s = 1.0) {
  for (const auto& [e, c] : g) f[e] += s * c;
  return f;
}

inline int degree(const Poly& f) {
  int m = 0;
  for (const auto& [e, c] : f)
    if (c != 0.0) m = std::max(m, e.first + e.second);
  return m;
}

inline double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

inline Poly oracle_star(const Poly& f, const Poly& g, double hbar) {
  Poly out;
  const int top = std::min(degree(f), degree(g));
  Complex pre = 1.0;
  for (int k = 0; k <= top; ++k) {
    if (k > 0) pre *= Complex(0.0, hbar / 2) / static_cast<double>(k);
    for (int j = 0; j <= k; ++j) {
      const double sign = j % 2 == 0 ? 1.0 : -1.0;
      out = add(out, mul(d(f, k - j, j), d(g, j, k - j)), pre * (binom(k, j) * sign));
    }
  }
  return out;
}

inline Poly oracle_bracket(const Poly& f, const Poly& g, double hbar) {
  return add(oracle_star(f, g, hbar), oracle_star(g, f, hbar), -1.0);  // times 1 / (i hbar) at evaluation
}

inline Complex eval(const Poly& f, const Point& x) {
  Complex s = 0.0;
  for (const auto& [e, c] : f) s += c * std::pow(x[0], e.first) * std::pow(x[1], e.second);
  return s;
}

}  // namespace altlin::oracle
