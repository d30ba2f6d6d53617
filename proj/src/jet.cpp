#include "altlin/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "altlin/errors.hpp"

namespace altlin::numcore {

namespace {

constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

void enumerate_degree(int vars, int degree, std::vector<int>& current, int pos,
                      std::vector<int>& out) {
  if (pos == vars - 1) {
    current[static_cast<std::size_t>(pos)] = degree;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(pos)] = e;
    enumerate_degree(vars, degree - e, current, pos + 1, out);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Reciprocal of a univariate power series p (p[0] != 0), `terms` coefficients.
std::vector<double> series_reciprocal(const std::vector<double>& p, int terms) {
  std::vector<double> r(static_cast<std::size_t>(std::max(terms, 0)), 0.0);
  if (terms <= 0) return r;
  r[0] = 1.0 / p[0];
  for (int k = 1; k < terms; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k && i < static_cast<int>(p.size()); ++i) {
      s += p[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
    }
    r[static_cast<std::size_t>(k)] = -s / p[0];
  }
  return r;
}

// Taylor coefficients of an antiderivative with constant c0, given the
// derivative series.
std::vector<double> integrate_series(double c0, const std::vector<double>& d, int order) {
  std::vector<double> c(static_cast<std::size_t>(order + 1), 0.0);
  c[0] = c0;
  for (int k = 1; k <= order; ++k) c[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k - 1)] / k;
  return c;
}

Jet flat(const Jet& a, double v) {
  return a.is_constant() ? Jet(v) : Jet(a.layout(), v);
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw DomainError("division by a jet with zero value");
  if (a.is_flat()) return flat(a, 1.0 / a0);
  const int d = a.order();
  std::vector<double> c(static_cast<std::size_t>(d + 1));
  double p = 1.0 / a0;
  for (int k = 0; k <= d; ++k) {
    c[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
    p /= a0;
  }
  return apply_series(a, c);
}

}  // namespace

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 0) throw DimensionError("jet layout needs a non-negative variable count");
  if (order < 0 || order > kMaxJetOrder) {
    throw JetOrderError("jet order " + std::to_string(order) + " outside [0, " +
                        std::to_string(kMaxJetOrder) + "]");
  }
  std::vector<int> current(static_cast<std::size_t>(vars), 0);
  if (vars == 0) {
    degrees_.push_back(0);
  } else {
    for (int deg = 0; deg <= order; ++deg) {
      const std::size_t before = exponents_.size();
      enumerate_degree(vars, deg, current, 0, exponents_);
      const std::size_t added = (exponents_.size() - before) / static_cast<std::size_t>(vars);
      degrees_.insert(degrees_.end(), added, deg);
    }
  }

  std::uint64_t span = 1;
  for (int i = 0; i < vars; ++i) span *= static_cast<std::uint64_t>(order + 1);
  if (span > (1u << 24)) throw DimensionError("jet layout too large");
  lookup_.assign(span, kAbsent);
  for (std::size_t k = 0; k < size(); ++k) lookup_[code(exponents(k))] = static_cast<std::uint32_t>(k);

  std::vector<int> sum(static_cast<std::size_t>(vars));
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b = 0; b < size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      for (int i = 0; i < vars; ++i) sum[static_cast<std::size_t>(i)] = exponents(a)[static_cast<std::size_t>(i)] + exponents(b)[static_cast<std::size_t>(i)];
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           lookup_[code(sum)]});
    }
  }

  derivative_sources_.resize(static_cast<std::size_t>(vars));
  if (order >= 1) {
    std::size_t lower = 0;
    while (lower < size() && degrees_[lower] <= order - 1) ++lower;
    std::vector<int> raised(static_cast<std::size_t>(vars));
    for (int v = 0; v < vars; ++v) {
      auto& src = derivative_sources_[static_cast<std::size_t>(v)];
      src.reserve(lower);
      for (std::size_t k = 0; k < lower; ++k) {
        auto e = exponents(k);
        std::copy(e.begin(), e.end(), raised.begin());
        raised[static_cast<std::size_t>(v)] += 1;
        src.push_back({lookup_[code(raised)], static_cast<double>(raised[static_cast<std::size_t>(v)])});
      }
    }
  }
}

std::uint64_t JetLayout::code(std::span<const int> exponents) const {
  std::uint64_t c = 0;
  for (int i = vars_ - 1; i >= 0; --i) {
    c = c * static_cast<std::uint64_t>(order_ + 1) + static_cast<std::uint64_t>(exponents[static_cast<std::size_t>(i)]);
  }
  return c;
}

std::size_t JetLayout::index(std::span<const int> exponents) const {
  int total = 0;
  for (int e : exponents) {
    if (e < 0) throw JetOrderError("negative exponent");
    total += e;
  }
  if (total > order_) {
    throw JetOrderError("partial of order " + std::to_string(total) + " requested from a jet of order " +
                        std::to_string(order_));
  }
  return lookup_[code(exponents)];
}

std::shared_ptr<const JetLayout> JetLayout::get(int vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(vars, order);
  return slot;
}

Jet::Jet(LayoutPtr layout, double value) : layout_(std::move(layout)) {
  coeffs_.assign(layout_ ? layout_->size() : 1, 0.0);
  coeffs_[0] = value;
}

Jet Jet::variable(LayoutPtr layout, int var, double value) {
  Jet j(layout, value);
  if (layout->order() >= 1) {
    std::vector<int> e(static_cast<std::size_t>(layout->vars()), 0);
    e[static_cast<std::size_t>(var)] = 1;
    j.coeffs_[layout->index(e)] = 1.0;
  }
  return j;
}

bool Jet::is_flat() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

double Jet::partial(std::initializer_list<int> vars) const {
  return partial(std::span<const int>(vars.begin(), vars.size()));
}

double Jet::partial(std::span<const int> vars) const {
  if (!layout_) return vars.empty() ? value() : 0.0;
  std::vector<int> e(static_cast<std::size_t>(layout_->vars()), 0);
  for (int v : vars) {
    if (v < 0 || v >= layout_->vars()) throw DimensionError("partial: variable index out of range");
    ++e[static_cast<std::size_t>(v)];
  }
  double scale = 1.0;
  for (int k : e) scale *= factorial(k);
  return coeffs_[layout_->index(e)] * scale;
}

Jet Jet::derivative(int var) const {
  if (!layout_) return Jet(0.0);
  if (var < 0 || var >= layout_->vars()) throw DimensionError("derivative: variable index out of range");
  if (layout_->order() == 0) throw JetOrderError("cannot differentiate an order-0 jet");
  auto lower = JetLayout::get(layout_->vars(), layout_->order() - 1);
  std::vector<double> c(lower->size());
  auto src = layout_->derivative_sources(var);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeffs_[src[k].index] * src[k].factor;
  return Jet(std::move(lower), std::move(c));
}

Jet Jet::truncate(int order) const {
  if (!layout_ || order >= layout_->order()) return *this;
  if (order < 0) throw JetOrderError("negative truncation order");
  auto lower = JetLayout::get(layout_->vars(), order);
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lower->size()));
  return Jet(std::move(lower), std::move(c));
}

Jet Jet::compose(std::span<const Jet> displacement) const {
  if (!layout_) return *this;
  if (static_cast<int>(displacement.size()) != layout_->vars()) {
    throw DimensionError("compose: displacement count does not match jet variables");
  }
  LayoutPtr target;
  for (const auto& d : displacement) {
    if (d.layout_) {
      if (target && (target->vars() != d.layout_->vars() || target->order() != d.layout_->order())) {
        throw DimensionError("compose: displacements use different layouts");
      }
      target = d.layout_;
    }
  }
  if (!target || target->order() == 0) return target ? Jet(target, value()) : Jet(value());

  const int inner = target->order();
  const int n = layout_->vars();
  const int top = std::min(inner, layout_->order());
  // powers[i][k] = delta_i^k
  std::vector<std::vector<Jet>> powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet delta = displacement[static_cast<std::size_t>(i)];
    delta.adopt(target);
    delta.coeffs_[0] = 0.0;
    auto& p = powers[static_cast<std::size_t>(i)];
    p.reserve(static_cast<std::size_t>(top + 1));
    p.emplace_back(target, 1.0);
    for (int k = 1; k <= top; ++k) p.push_back(p.back() * delta);
  }
  Jet out(target, 0.0);
  for (std::size_t m = 0; m < layout_->size() && layout_->degree(m) <= top; ++m) {
    const double c = coeffs_[m];
    if (c == 0.0) continue;
    auto e = layout_->exponents(m);
    Jet term(target, c);
    for (int i = 0; i < n; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k > 0) term *= powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    out += term;
  }
  return out;
}

void Jet::adopt(const LayoutPtr& layout) {
  if (layout_ || !layout) return;
  const double v = coeffs_[0];
  layout_ = layout;
  coeffs_.assign(layout_->size(), 0.0);
  coeffs_[0] = v;
}

namespace {
void check_same(const LayoutPtr& a, const LayoutPtr& b) {
  if (a != b && (a->vars() != b->vars() || a->order() != b->order())) {
    throw DimensionError("jet arithmetic across different layouts (" + std::to_string(a->vars()) + "," +
                         std::to_string(a->order()) + ") vs (" + std::to_string(b->vars()) + "," +
                         std::to_string(b->order()) + ")");
  }
}
}  // namespace

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (!rhs.layout_) {
    coeffs_[0] += rhs.coeffs_[0];
    return *this;
  }
  adopt(rhs.layout_);
  check_same(layout_, rhs.layout_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (!rhs.layout_) {
    coeffs_[0] -= rhs.coeffs_[0];
    return *this;
  }
  adopt(rhs.layout_);
  check_same(layout_, rhs.layout_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet& Jet::scale(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  if (!rhs.layout_) return scale(rhs.coeffs_[0]);
  if (!layout_) {
    const double s = coeffs_[0];
    *this = rhs;
    return scale(s);
  }
  check_same(layout_, rhs.layout_);
  std::vector<double> out(coeffs_.size(), 0.0);
  for (const auto& p : layout_->products()) out[p.out] += coeffs_[p.lhs] * rhs.coeffs_[p.rhs];
  coeffs_ = std::move(out);
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  if (!rhs.layout_) {
    if (rhs.coeffs_[0] == 0.0) throw DomainError("division by zero");
    return scale(1.0 / rhs.coeffs_[0]);
  }
  return *this *= reciprocal(rhs);
}

Jet apply_series(const Jet& a, std::span<const double> taylor) {
  if (!a.layout_ || a.layout_->order() == 0) return flat(a, taylor[0]);
  const int d = a.layout_->order();
  if (static_cast<int>(taylor.size()) < d + 1) throw JetOrderError("series shorter than jet order");
  Jet h = a;
  h.coeffs_[0] = 0.0;
  Jet r(a.layout_, taylor[static_cast<std::size_t>(d)]);
  for (int k = d - 1; k >= 0; --k) {
    r *= h;
    r.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

Jet sqr(const Jet& a) { return a * a; }

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  if (a.is_flat()) return flat(a, e);
  std::vector<double> c(static_cast<std::size_t>(a.order() + 1));
  for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = e / factorial(k);
  return apply_series(a, c);
}

Jet log(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw DomainError("log of a non-positive value");
  if (a.is_flat()) return flat(a, std::log(a0));
  std::vector<double> c(static_cast<std::size_t>(a.order() + 1));
  c[0] = std::log(a0);
  double p = a0;
  for (int k = 1; k <= a.order(); ++k, p *= a0) c[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) / (k * p);
  return apply_series(a, c);
}

namespace {
Jet trig(const Jet& a, int phase) {
  const double s = std::sin(a.value());
  const double co = std::cos(a.value());
  const double cycle[4] = {s, co, -s, -co};
  if (a.is_flat()) return flat(a, cycle[phase % 4]);
  std::vector<double> c(static_cast<std::size_t>(a.order() + 1));
  for (int k = 0; k <= a.order(); ++k) c[static_cast<std::size_t>(k)] = cycle[(k + phase) % 4] / factorial(k);
  return apply_series(a, c);
}
}  // namespace

Jet sin(const Jet& a) { return trig(a, 0); }
Jet cos(const Jet& a) { return trig(a, 1); }

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) return reciprocal(pow(a, -exponent));
  Jet result = flat(a, 1.0);
  Jet base = a;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

Jet pow(const Jet& a, double exponent) {
  if (exponent == std::floor(exponent) && std::abs(exponent) <= 64.0) return pow(a, static_cast<int>(exponent));
  const double a0 = a.value();
  if (a0 < 0.0) throw DomainError("non-integer power of a negative value");
  if (a.is_flat()) return flat(a, std::pow(a0, exponent));
  if (a0 == 0.0) throw NotDifferentiable("non-integer power is not differentiable at 0");
  std::vector<double> c(static_cast<std::size_t>(a.order() + 1));
  double binom = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    c[static_cast<std::size_t>(k)] = binom * std::pow(a0, exponent - k);
    binom *= (exponent - k) / (k + 1);
  }
  return apply_series(a, c);
}

Jet sqrt(const Jet& a) {
  if (a.value() < 0.0) throw DomainError("sqrt of a negative value");
  return pow(a, 0.5);
}

Jet cbrt(const Jet& a) {
  const double a0 = a.value();
  if (a.is_flat()) return flat(a, std::cbrt(a0));
  if (a0 == 0.0) throw NotDifferentiable("cube root is not differentiable at 0");
  return a0 > 0.0 ? pow(a, 1.0 / 3.0) : -pow(-a, 1.0 / 3.0);
}

Jet tanh(const Jet& a) {
  const double y0 = std::tanh(a.value());
  if (a.is_flat()) return flat(a, y0);
  const int d = a.order();
  std::vector<double> y(static_cast<std::size_t>(d + 1), 0.0);
  y[0] = y0;
  for (int k = 0; k < d; ++k) {
    double s = (k == 0 ? 1.0 : 0.0);
    for (int i = 0; i <= k; ++i) s -= y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(k - i)];
    y[static_cast<std::size_t>(k + 1)] = s / (k + 1);
  }
  return apply_series(a, y);
}

Jet atanh(const Jet& a) {
  const double a0 = a.value();
  if (!(std::abs(a0) < 1.0)) throw DomainError("atanh outside (-1, 1)");
  if (a.is_flat()) return flat(a, std::atanh(a0));
  const int d = a.order();
  auto deriv = series_reciprocal({1.0 - a0 * a0, -2.0 * a0, -1.0}, d);
  return apply_series(a, integrate_series(std::atanh(a0), deriv, d));
}

Jet atan(const Jet& a) {
  const double a0 = a.value();
  if (a.is_flat()) return flat(a, std::atan(a0));
  const int d = a.order();
  auto deriv = series_reciprocal({1.0 + a0 * a0, 2.0 * a0, 1.0}, d);
  return apply_series(a, integrate_series(std::atan(a0), deriv, d));
}

Jet atan2(const Jet& y, const Jet& x) {
  const double y0 = y.value();
  const double x0 = x.value();
  const double v = std::atan2(y0, x0);
  if (y.is_flat() && x.is_flat()) {
    Jet r = flat(y, v);
    if (r.is_constant()) r = flat(x, v);
    return r;
  }
  if (x0 == 0.0 && y0 == 0.0) throw NotDifferentiable("atan2 is not differentiable at the origin");
  Jet t = (std::abs(x0) >= std::abs(y0)) ? atan(y / x) : -atan(x / y);
  t.coefficients()[0] = v;
  return t;
}

std::vector<Jet> seed(std::span<const double> x0, int order) {
  auto layout = JetLayout::get(static_cast<int>(x0.size()), order);
  std::vector<Jet> out;
  out.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out.push_back(Jet::variable(layout, static_cast<int>(i), x0[i]));
  return out;
}

Point values(std::span<const Jet> x) {
  Point p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = x[i].value();
  return p;
}

int common_order(std::span<const Jet> x) {
  int order = 0;
  const JetLayout* seen = nullptr;
  for (const auto& j : x) {
    if (!j.layout()) continue;
    if (seen && (seen->vars() != j.layout()->vars() || seen->order() != j.layout()->order())) {
      throw DimensionError("jets with different layouts in one point");
    }
    seen = j.layout().get();
    order = j.order();
  }
  return order;
}

Jet jet_eval(const ScalarField& f, std::span<const double> x, int order) {
  if (order < 0 || order > kMaxJetOrder) throw JetOrderError("jet_eval order out of range");
  auto vars = seed(x, order);
  Jet r = f(vars);
  if (r.is_constant()) return Jet(JetLayout::get(static_cast<int>(x.size()), order), r.value());
  return r;
}

double evaluate(const ScalarField& f, std::span<const double> x) { return jet_eval(f, x, 0).value(); }

Point evaluate(const JetMap& f, std::span<const double> x) {
  auto vars = seed(x, 0);
  return values(f(vars));
}

namespace {
bool is_identity_seed(std::span<const Jet> x) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const auto& j = x[static_cast<std::size_t>(i)];
    if (!j.layout() || j.vars() != n) return false;
    const auto& L = *j.layout();
    for (std::size_t k = 1; k < L.size(); ++k) {
      const double expect = (L.degree(k) == 1 && L.exponents(k)[static_cast<std::size_t>(i)] == 1) ? 1.0 : 0.0;
      if (j.coefficients()[k] != expect) return false;
    }
  }
  return true;
}
}  // namespace

std::vector<Jet> lift(std::span<const Jet> x, int extra,
                      const std::function<std::vector<Jet>(std::span<const Jet>)>& body) {
  const int m = common_order(x);
  if (m + extra > kMaxJetOrder) {
    throw JetOrderError("operator needs jets of order " + std::to_string(m + extra) + " (cap " +
                        std::to_string(kMaxJetOrder) + ")");
  }
  const Point x0 = values(x);
  auto local = seed(x0, m + extra);
  auto out = body(local);
  if (m > 0 && is_identity_seed(x)) {
    for (auto& o : out) o = o.truncate(m);
    return out;
  }
  std::vector<Jet> disp(x.begin(), x.end());
  for (auto& d : disp) d.coefficients()[0] = 0.0;
  for (auto& o : out) o = o.compose(disp);
  return out;
}

std::vector<Jet> solve(JetMatrix a, std::vector<Jet> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw DimensionError("solve: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    }
    if (a(piv, col).value() == 0.0) throw DomainError("solve: singular matrix");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    }
    const Jet inv = Jet(1.0) / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col).is_constant() && a(r, col).value() == 0.0) continue;
      const Jet f = a(r, col) * inv;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<Jet> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    Jet s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = s / a(r, r);
  }
  return x;
}

}  // namespace altlin::numcore
