#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace altlin::numcore {

/// Highest total derivative order a Jet may carry.
inline constexpr int kMaxJetOrder = 4;

/// Monomial bookkeeping for truncated Taylor polynomials in `vars` variables
/// up to total degree `order`. Monomials are ordered by total degree first,
/// so the layout of a lower order is a prefix of this one.
class JetLayout {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct Source {
    std::uint32_t index;
    double factor;
  };

  /// Shared, immutable layout for (vars, order). Thread-safe.
  static std::shared_ptr<const JetLayout> get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  std::size_t size() const { return degrees_.size(); }

  std::span<const int> exponents(std::size_t k) const {
    return {exponents_.data() + k * static_cast<std::size_t>(vars_),
            static_cast<std::size_t>(vars_)};
  }
  int degree(std::size_t k) const { return degrees_[k]; }

  /// Index of a monomial; throws JetOrderError past `order`.
  std::size_t index(std::span<const int> exponents) const;

  std::span<const Product> products() const { return products_; }

  /// For d/dx_var: entry k of the (order-1) layout comes from
  /// `index` here, multiplied by `factor`.
  std::span<const Source> derivative_sources(int var) const {
    return derivative_sources_[static_cast<std::size_t>(var)];
  }

  JetLayout(int vars, int order);

 private:
  std::uint64_t code(std::span<const int> exponents) const;

  int vars_;
  int order_;
  std::vector<int> exponents_;
  std::vector<int> degrees_;
  std::vector<std::uint32_t> lookup_;  // dense over codes; UINT32_MAX = absent
  std::vector<Product> products_;
  std::vector<std::vector<Source>> derivative_sources_;
};

using LayoutPtr = std::shared_ptr<const JetLayout>;

/// Truncated multivariate Taylor polynomial: the value of a scalar
/// expression and all of its partial derivatives up to the layout order.
/// Coefficients are stored as Taylor coefficients (partial / multi-index
/// factorial). A Jet without a layout is a plain constant and adapts to
/// whatever layout it is combined with.
class Jet {
 public:
  Jet() : coeffs_{0.0} {}
  Jet(double constant) : coeffs_{constant} {}  // NOLINT(implicit)
  Jet(LayoutPtr layout, double value);

  static Jet variable(LayoutPtr layout, int var, double value);

  double value() const { return coeffs_[0]; }
  bool is_constant() const { return layout_ == nullptr; }
  int order() const { return layout_ ? layout_->order() : 0; }
  int vars() const { return layout_ ? layout_->vars() : 0; }
  const LayoutPtr& layout() const { return layout_; }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<double> coefficients() { return coeffs_; }

  /// True when every non-constant coefficient is zero.
  bool is_flat() const;

  /// Mixed partial derivative; `vars` lists the differentiation variables,
  /// e.g. {0, 1} is d^2/dx0 dx1. Zero beyond the carried order is an error.
  double partial(std::initializer_list<int> vars) const;
  double partial(std::span<const int> vars) const;

  /// Jet of d/dx_var; one order lower.
  Jet derivative(int var) const;
  /// Drops all terms of degree greater than `order`.
  Jet truncate(int order) const;
  /// Substitutes the variables by `displacement` (nilpotent jets sharing one
  /// layout) and returns the composed jet in that layout.
  Jet compose(std::span<const Jet> displacement) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(Jet lhs, const Jet& rhs) { return lhs *= rhs; }
  friend Jet operator/(Jet lhs, const Jet& rhs) { return lhs /= rhs; }
  friend Jet operator+(Jet lhs, double rhs) { lhs.coeffs_[0] += rhs; return lhs; }
  friend Jet operator+(double lhs, Jet rhs) { rhs.coeffs_[0] += lhs; return rhs; }
  friend Jet operator-(Jet lhs, double rhs) { lhs.coeffs_[0] -= rhs; return lhs; }
  friend Jet operator-(double lhs, const Jet& rhs) { return (-rhs) + lhs; }
  friend Jet operator*(Jet lhs, double rhs) { return lhs.scale(rhs); }
  friend Jet operator*(double lhs, Jet rhs) { return rhs.scale(lhs); }
  friend Jet operator/(Jet lhs, double rhs) { return lhs.scale(1.0 / rhs); }

 private:
  Jet(LayoutPtr layout, std::vector<double> coeffs)
      : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {}
  Jet& scale(double s);
  void adopt(const LayoutPtr& layout);

  LayoutPtr layout_;
  std::vector<double> coeffs_;

  friend Jet apply_series(const Jet& a, std::span<const double> taylor);
};

/// Evaluates sum_k taylor[k] * (a - a(0))^k.
Jet apply_series(const Jet& a, std::span<const double> taylor);

Jet sqr(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sqrt(const Jet& a);
/// Real cube root, odd in its argument; not differentiable at 0.
Jet cbrt(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet pow(const Jet& a, int exponent);
Jet tanh(const Jet& a);
Jet atanh(const Jet& a);
Jet atan(const Jet& a);
Jet atan2(const Jet& y, const Jet& x);

using Point = std::vector<double>;
using ScalarField = std::function<Jet(std::span<const Jet>)>;
using JetMap = std::function<std::vector<Jet>(std::span<const Jet>)>;

/// Fresh variables x_i + dx_i at `x0` carrying `order` derivatives.
std::vector<Jet> seed(std::span<const double> x0, int order);
Point values(std::span<const Jet> x);
/// Common order of a jet vector (0 for all-constant input).
int common_order(std::span<const Jet> x);

/// Evaluates `f` at x with exact partials up to `order`.
Jet jet_eval(const ScalarField& f, std::span<const double> x, int order);
double evaluate(const ScalarField& f, std::span<const double> x);
Point evaluate(const JetMap& f, std::span<const double> x);

/// Runs `body` on a local expansion at the base point of `x` carrying
/// `extra` more orders than `x`, and composes every output back onto `x`.
/// This is how derivative-taking operators stay composable with jets.
std::vector<Jet> lift(std::span<const Jet> x, int extra,
                      const std::function<std::vector<Jet>(std::span<const Jet>)>& body);

/// Dense matrix of jets, row-major.
class JetMatrix {
 public:
  JetMatrix() = default;
  JetMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Jet& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Jet> data_;
};

/// Solves A x = b in jet arithmetic (partial pivoting on values).
std::vector<Jet> solve(JetMatrix a, std::vector<Jet> b);

}  // namespace altlin::numcore
