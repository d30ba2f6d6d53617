#include "altlin/geometry.hpp"

#include <cmath>
#include <string>

#include "altlin/errors.hpp"

namespace altlin::geometry {

using numcore::common_order;
using numcore::lift;
using numcore::seed;
using numcore::values;

namespace {

void require_dim(std::size_t got, int want, const char* what) {
  if (static_cast<int>(got) != want) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(want) + " components, got " +
                         std::to_string(got));
  }
}

std::vector<Jet> flatten(const JetMatrix& m) {
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

JetMatrix unflatten(const std::vector<Jet>& v, int rows, int cols) {
  JetMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = v[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

Matrix to_values(const JetMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).value();
  }
  return out;
}

// Order of the caller's point inside a lift body that added one order.
int outer_order(std::span<const Jet> local) { return common_order(local) - 1; }

}  // namespace

std::vector<Jet> VectorField::operator()(std::span<const Jet> x) const {
  auto v = components(x);
  require_dim(v.size(), dim, "vector field");
  return v;
}

Point VectorField::at(const Point& x) const { return values((*this)(seed(x, 0))); }

VectorField VectorField::constant(const Vector& v) {
  const int n = static_cast<int>(v.size());
  return {n, [v](std::span<const Jet>) {
            std::vector<Jet> out;
            for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(v(i));
            return out;
          }};
}

VectorField VectorField::zero(int dim) { return constant(Vector::Zero(dim)); }

VectorField VectorField::liouville(int dim) {
  return {dim, [](std::span<const Jet> x) { return std::vector<Jet>(x.begin(), x.end()); }};
}

std::vector<Jet> OneForm::operator()(std::span<const Jet> x) const {
  auto v = components(x);
  require_dim(v.size(), dim, "one-form");
  return v;
}

Point OneForm::at(const Point& x) const { return values((*this)(seed(x, 0))); }

OneForm OneForm::constant(const Vector& a) {
  auto v = VectorField::constant(a);
  return {v.dim, v.components};
}

JetMatrix TwoForm::operator()(std::span<const Jet> x) const {
  auto m = components(x);
  if (m.rows() != dim || m.cols() != dim) throw DimensionError("two-form: wrong matrix shape");
  return m;
}

Matrix TwoForm::at(const Point& x) const { return to_values((*this)(seed(x, 0))); }

TwoForm TwoForm::constant(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  return {n, [m, n](std::span<const Jet>) {
            JetMatrix out(n, n);
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) out(i, j) = m(i, j);
            }
            return out;
          }};
}

TwoForm TwoForm::canonical(int n) {
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n) = Matrix::Identity(n, n);
  m.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return constant(m);
}

Matrix BilinearForm::at(const Point& x) const { return to_values(components(seed(x, 0))); }

JetMatrix OneOneTensor::operator()(std::span<const Jet> x) const {
  auto m = components(x);
  if (m.rows() != dim || m.cols() != dim) throw DimensionError("(1,1) tensor: wrong matrix shape");
  return m;
}

Matrix OneOneTensor::at(const Point& x) const { return to_values((*this)(seed(x, 0))); }

OneOneTensor OneOneTensor::constant(const Matrix& m) {
  auto t = TwoForm::constant(m);
  return {t.dim, t.components};
}

OneOneTensor OneOneTensor::identity(int n) { return constant(Matrix::Identity(n, n)); }

OneOneTensor OneOneTensor::complex_structure(int n) { return constant(TwoForm::canonical(n).at(Point(2 * n, 0.0))); }

VectorField pushforward(const linstruct::Diffeomorphism& phi, const VectorField& x) {
  if (phi.dim != x.dim) throw DimensionError("pushforward: dimension mismatch");
  const int n = x.dim;
  return {n, [phi, x, n](std::span<const Jet> y) {
            if (!phi.in_domain(values(y))) throw DomainError("pushforward: point outside " + phi.name + " chart");
            const auto pre = phi.inverse(y);
            return lift(pre, 1, [&](std::span<const Jet> local) {
              const int m = outer_order(local);
              const auto f = phi.forward(local);
              const auto v = x(local);
              std::vector<Jet> out(static_cast<std::size_t>(n), Jet(0.0));
              for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                  out[static_cast<std::size_t>(i)] +=
                      f[static_cast<std::size_t>(i)].derivative(j) * v[static_cast<std::size_t>(j)].truncate(m);
                }
              }
              return out;
            });
          }};
}

Matrix jacobian(const JetMap& f, const Point& x) {
  const auto out = f(seed(x, 1));
  Matrix j(static_cast<Eigen::Index>(out.size()), static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < x.size(); ++k) j(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = out[i].partial({static_cast<int>(k)});
  }
  return j;
}

TwoForm pullback(const JetMap& f, int dim, const TwoForm& omega) {
  return {dim, [f, dim, omega](std::span<const Jet> x) {
            auto flat = lift(x, 1, [&](std::span<const Jet> local) {
              const int m = outer_order(local);
              auto image = f(local);
              const int k = static_cast<int>(image.size());
              JetMatrix df(k, dim);
              for (int a = 0; a < k; ++a) {
                for (int b = 0; b < dim; ++b) df(a, b) = image[static_cast<std::size_t>(a)].derivative(b);
              }
              for (auto& c : image) c = c.truncate(m);
              const JetMatrix w = omega(image);
              JetMatrix out(dim, dim);
              for (int i = 0; i < dim; ++i) {
                for (int j = 0; j < dim; ++j) {
                  Jet s(0.0);
                  for (int a = 0; a < k; ++a) {
                    for (int b = 0; b < k; ++b) {
                      if (w(a, b).is_constant() && w(a, b).value() == 0.0) continue;
                      s += df(a, i) * w(a, b) * df(b, j);
                    }
                  }
                  out(i, j) = s;
                }
              }
              return flatten(out);
            });
            return unflatten(flat, dim, dim);
          }};
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim != y.dim) throw DimensionError("lie_bracket: dimension mismatch");
  const int n = x.dim;
  return {n, [x, y, n](std::span<const Jet> p) {
            return lift(p, 1, [&](std::span<const Jet> local) {
              const int m = outer_order(local);
              const auto xv = x(local);
              const auto yv = y(local);
              std::vector<Jet> out(static_cast<std::size_t>(n), Jet(0.0));
              for (int i = 0; i < n; ++i) {
                auto& o = out[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j) {
                  o += xv[static_cast<std::size_t>(j)].truncate(m) * yv[static_cast<std::size_t>(i)].derivative(j);
                  o -= yv[static_cast<std::size_t>(j)].truncate(m) * xv[static_cast<std::size_t>(i)].derivative(j);
                }
              }
              return out;
            });
          }};
}

OneForm differential(const ScalarField& f, int dim) {
  return {dim, [f, dim](std::span<const Jet> p) {
            return lift(p, 1, [&](std::span<const Jet> local) {
              const Jet v = f(local);
              std::vector<Jet> out;
              for (int i = 0; i < dim; ++i) out.push_back(v.derivative(i));
              return out;
            });
          }};
}

TwoForm exterior_d(const OneForm& alpha) {
  const int n = alpha.dim;
  return {n, [alpha, n](std::span<const Jet> p) {
            auto flat = lift(p, 1, [&](std::span<const Jet> local) {
              const auto a = alpha(local);
              JetMatrix out(n, n);
              for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                  out(i, j) = a[static_cast<std::size_t>(j)].derivative(i) - a[static_cast<std::size_t>(i)].derivative(j);
                }
              }
              return flatten(out);
            });
            return unflatten(flat, n, n);
          }};
}

OneForm interior_product(const VectorField& x, const TwoForm& omega) {
  if (x.dim != omega.dim) throw DimensionError("interior_product: dimension mismatch");
  const int n = x.dim;
  return {n, [x, omega, n](std::span<const Jet> p) {
            const auto v = x(p);
            const auto w = omega(p);
            std::vector<Jet> out(static_cast<std::size_t>(n), Jet(0.0));
            for (int j = 0; j < n; ++j) {
              for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(i)] * w(i, j);
            }
            return out;
          }};
}

OneForm d_S(const ScalarField& f, const OneOneTensor& s) {
  const int n = s.dim;
  const OneForm df = differential(f, n);
  return {n, [df, s, n](std::span<const Jet> p) {
            const auto g = df(p);
            const auto t = s(p);
            std::vector<Jet> out(static_cast<std::size_t>(n), Jet(0.0));
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += g[static_cast<std::size_t>(j)] * t(j, i);
            }
            return out;
          }};
}

ScalarField lie_derivative(const VectorField& x, const ScalarField& f) {
  const OneForm df = differential(f, x.dim);
  return apply(df, x);
}

ScalarField apply(const OneForm& alpha, const VectorField& x) {
  if (alpha.dim != x.dim) throw DimensionError("apply: dimension mismatch");
  return [alpha, x](std::span<const Jet> p) {
    const auto a = alpha(p);
    const auto v = x(p);
    Jet s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * v[i];
    return s;
  };
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  if (a.dim != b.dim) throw DimensionError("wedge: dimension mismatch");
  const int n = a.dim;
  return {n, [a, b, n](std::span<const Jet> p) {
            const auto u = a(p);
            const auto v = b(p);
            JetMatrix out(n, n);
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) {
                out(i, j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)] -
                            u[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)];
              }
            }
            return out;
          }};
}

VectorField apply(const OneOneTensor& s, const VectorField& x) {
  if (s.dim != x.dim) throw DimensionError("apply: dimension mismatch");
  const int n = x.dim;
  return {n, [s, x, n](std::span<const Jet> p) {
            const auto t = s(p);
            const auto v = x(p);
            std::vector<Jet> out(static_cast<std::size_t>(n), Jet(0.0));
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i)] += t(i, j) * v[static_cast<std::size_t>(j)];
            }
            return out;
          }};
}

BilinearForm compose_J_omega(const OneOneTensor& j, const TwoForm& omega) {
  if (j.dim != omega.dim) throw DimensionError("compose_J_omega: dimension mismatch");
  const int n = j.dim;
  return {n, [j, omega, n](std::span<const Jet> p) {
            const auto t = j(p);
            const auto w = omega(p);
            JetMatrix g(n, n);
            for (int a = 0; a < n; ++a) {
              for (int b = 0; b < n; ++b) {
                Jet s(0.0);
                for (int k = 0; k < n; ++k) s += t(k, a) * w(k, b);
                g(a, b) = s;
              }
            }
            return g;
          }};
}

double nijenhuis_constant_residual(const OneOneTensor& s, std::span<const Point> points) {
  double worst = 0.0;
  for (const auto& x : points) {
    const auto t = s(seed(x, 1));
    for (int i = 0; i < t.rows(); ++i) {
      for (int j = 0; j < t.cols(); ++j) {
        for (int k = 0; k < s.dim; ++k) worst = std::max(worst, std::abs(t(i, j).partial({k})));
      }
    }
  }
  return worst;
}

double antisymmetry_residual(const TwoForm& omega, const Point& x) {
  const Matrix m = omega.at(x);
  return (m + m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace altlin::geometry
