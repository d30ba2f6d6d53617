#include <cmath>
#include <numbers>

#include "altlin/errors.hpp"
#include "altlin/linstruct.hpp"

namespace altlin {

using numcore::Jet;
using numcore::JetMap;

std::vector<Jet> VectorPotential::operator()(std::span<const Jet> q) const {
  if (q.size() != 3) throw DimensionError("vector potential takes 3 coordinates");
  auto a = field(q);
  if (a.size() != 3) throw DimensionError("vector potential must return 3 components");
  return a;
}

Eigen::Vector3d VectorPotential::at(const Eigen::Vector3d& q) const {
  const auto a = numcore::evaluate(field, numcore::Point{q.x(), q.y(), q.z()});
  return {a[0], a[1], a[2]};
}

Eigen::Vector3d VectorPotential::curl(const Eigen::Vector3d& q) const {
  const auto a = (*this)(numcore::seed(std::vector<double>{q.x(), q.y(), q.z()}, 1));
  auto d = [&](int comp, int var) { return a[static_cast<std::size_t>(comp)].is_constant() ? 0.0 : a[static_cast<std::size_t>(comp)].partial({var}); };
  return {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)};
}

VectorPotential VectorPotential::zero() {
  return {"zero", [](std::span<const Jet>) { return std::vector<Jet>(3, Jet(0.0)); }};
}

VectorPotential VectorPotential::symmetric(const Eigen::Vector3d& b) {
  return {"symmetric", [b](std::span<const Jet> q) {
            return std::vector<Jet>{0.5 * (b.y() * q[2] - b.z() * q[1]), 0.5 * (b.z() * q[0] - b.x() * q[2]),
                                    0.5 * (b.x() * q[1] - b.y() * q[0])};
          }};
}

VectorPotential VectorPotential::general() {
  return {"general", [](std::span<const Jet> q) { return std::vector<Jet>{Jet(0.0), q[0] * q[2], Jet(0.0)}; }};
}

VectorPotential VectorPotential::gauge_shift(const VectorPotential& a, const numcore::ScalarField& chi) {
  return {a.name + "+grad", [a, chi](std::span<const Jet> q) {
            auto grad = numcore::lift(q, 1, [&](std::span<const Jet> local) {
              const Jet c = chi(local);
              return std::vector<Jet>{c.derivative(0), c.derivative(1), c.derivative(2)};
            });
            auto out = a(q);
            for (std::size_t i = 0; i < 3; ++i) out[i] += grad[i];
            return out;
          }};
}

}  // namespace altlin

namespace altlin::linstruct {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

JetMap componentwise(Jet (*f)(const Jet&)) {
  return [f](std::span<const Jet> x) {
    std::vector<Jet> out;
    out.reserve(x.size());
    for (const auto& xi : x) out.push_back(f(xi));
    return out;
  };
}

Point box(int n, double v) { return Point(static_cast<std::size_t>(n), v); }

void require_positive_dim(int n) {
  if (n < 1) throw std::invalid_argument("structure dimension must be >= 1");
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

Jet cube(const Jet& x) { return x * x * x; }
Jet cbrt_jet(const Jet& x) { return numcore::cbrt(x); }
Jet tanh_jet(const Jet& x) { return numcore::tanh(x); }
Jet atanh_jet(const Jet& x) { return numcore::atanh(x); }
Jet exp_jet(const Jet& x) { return numcore::exp(x); }
Jet log_jet(const Jet& x) { return numcore::log(x); }

}  // namespace

LinearStructure standard(int n) {
  require_positive_dim(n);
  LinearStructure l{Diffeomorphism::identity(n), {}, {}, {}};
  l.phi.name = "standard";
  l.add_rule = [](const Point& u, const Point& v) {
    Point r = u;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += v[i];
    return r;
  };
  l.scale_rule = [](double a, const Point& u) {
    Point r = u;
    for (auto& x : r) x *= a;
    return r;
  };
  return l;
}

LinearStructure ho_K(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("ho_K needs lambda >= 0");
  Diffeomorphism d;
  d.name = "ho_K";
  d.dim = 2;
  d.forward = [lambda](std::span<const Jet> x) {
    const Jet f = 1.0 + lambda * (x[0] * x[0] + x[1] * x[1]);
    return std::vector<Jet>{x[0] * f, x[1] * f};
  };
  d.inverse = [lambda](std::span<const Jet> y) {
    const Jet k = numcore::solve_K_jet(lambda, y[0] * y[0] + y[1] * y[1]);
    return std::vector<Jet>{y[0] * k, y[1] * k};
  };
  d.sample_lo = box(2, -2.0);
  d.sample_hi = box(2, 2.0);
  return {d, {}, {}, {}};
}

LinearStructure magnetic(const VectorPotential& a) {
  Diffeomorphism d;
  d.name = "magnetic-" + a.name;
  d.dim = 6;
  d.forward = [a](std::span<const Jet> x) {
    const auto pot = a(x.subspan(0, 3));
    std::vector<Jet> out(x.begin(), x.end());
    for (std::size_t i = 0; i < 3; ++i) out[3 + i] += pot[i];
    return out;
  };
  d.inverse = [a](std::span<const Jet> y) {
    const auto pot = a(y.subspan(0, 3));
    std::vector<Jet> out(y.begin(), y.end());
    for (std::size_t i = 0; i < 3; ++i) out[3 + i] -= pot[i];
    return out;
  };
  d.sample_lo = box(6, -2.0);
  d.sample_hi = box(6, 2.0);

  auto q_of = [](const Point& x) { return Eigen::Vector3d(x[0], x[1], x[2]); };
  LinearStructure l{d, {}, {}, {}};
  l.add_rule = [a, q_of](const Point& u, const Point& v) {
    const Eigen::Vector3d q = q_of(u);
    const Eigen::Vector3d q2 = q_of(v);
    const Eigen::Vector3d bracket = a.at(q + q2) - a.at(q) - a.at(q2);
    Point r(6);
    for (int i = 0; i < 3; ++i) {
      r[static_cast<std::size_t>(i)] = q[i] + q2[i];
      r[static_cast<std::size_t>(3 + i)] = u[static_cast<std::size_t>(3 + i)] + v[static_cast<std::size_t>(3 + i)] + bracket[i];
    }
    return r;
  };
  l.scale_rule = [a, q_of](double s, const Point& u) {
    const Eigen::Vector3d q = q_of(u);
    const Eigen::Vector3d bracket = a.at(s * q) - s * a.at(q);
    Point r(6);
    for (int i = 0; i < 3; ++i) {
      r[static_cast<std::size_t>(i)] = s * q[i];
      r[static_cast<std::size_t>(3 + i)] = s * u[static_cast<std::size_t>(3 + i)] + bracket[i];
    }
    return r;
  };
  l.sub_rule = [a, q_of](const Point& u, const Point& v) {
    const Eigen::Vector3d q = q_of(u);
    const Eigen::Vector3d q2 = q_of(v);
    const Eigen::Vector3d bracket = a.at(q - q2) + a.at(q2) - a.at(q);
    Point r(6);
    for (int i = 0; i < 3; ++i) {
      r[static_cast<std::size_t>(i)] = q[i] - q2[i];
      r[static_cast<std::size_t>(3 + i)] = u[static_cast<std::size_t>(3 + i)] - v[static_cast<std::size_t>(3 + i)] + bracket[i];
    }
    return r;
  };
  return l;
}

LinearStructure tanh_structure(int n) {
  require_positive_dim(n);
  Diffeomorphism d;
  d.name = "tanh";
  d.dim = n;
  d.forward = componentwise(tanh_jet);
  d.inverse = componentwise(atanh_jet);
  d.contains = [](const Point& x) {
    for (double v : x) {
      if (!(std::abs(v) < 1.0)) return false;
    }
    return true;
  };
  d.sample_lo = box(n, -0.99);
  d.sample_hi = box(n, 0.99);
  LinearStructure l{d, {}, {}, {}};
  l.add_rule = [](const Point& u, const Point& v) {
    Point r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = (u[i] + v[i]) / (1.0 + u[i] * v[i]);
    return r;
  };
  return l;
}

LinearStructure exp_structure(int n) {
  require_positive_dim(n);
  Diffeomorphism d;
  d.name = "exp";
  d.dim = n;
  d.forward = componentwise(exp_jet);
  d.inverse = componentwise(log_jet);
  d.contains = [](const Point& x) {
    for (double v : x) {
      if (!(v > 0.0) || !std::isfinite(v)) return false;
    }
    return true;
  };
  d.sample_lo = box(n, 0.2);
  d.sample_hi = box(n, 5.0);
  LinearStructure l{d, {}, {}, {}};
  l.add_rule = [](const Point& u, const Point& v) {
    Point r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] * v[i];
    return r;
  };
  l.scale_rule = [](double s, const Point& u) {
    Point r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::pow(u[i], s);
    return r;
  };
  return l;
}

LinearStructure cube_structure(int n) {
  require_positive_dim(n);
  Diffeomorphism d;
  d.name = "cube";
  d.dim = n;
  d.forward = componentwise(cube);
  d.inverse = componentwise(cbrt_jet);
  d.regular = [](const Point& x) {
    for (double v : x) {
      if (v == 0.0) return false;
    }
    return true;
  };
  d.sample_lo = box(n, -2.0);
  d.sample_hi = box(n, 2.0);
  LinearStructure l{d, {}, {}, {}};
  l.add_rule = [](const Point& u, const Point& v) {
    Point r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double s = std::cbrt(u[i]) + std::cbrt(v[i]);
      r[i] = s * s * s;
    }
    return r;
  };
  l.scale_rule = [](double s, const Point& u) {
    Point r(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = s * s * s * u[i];
    return r;
  };
  return l;
}

Eigen::Vector3d sphere_embed(const Point& polar) {
  const double t = polar[0];
  const double p = polar[1];
  return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

Eigen::Vector3d sphere_liouville_cartesian(const Eigen::Vector3d& x) {
  return {-x.x() * x.z(), -x.y() * x.z(), 1.0 - x.z() * x.z()};
}

Eigen::Vector3d sphere_scale_cartesian(double lambda, const Eigen::Vector3d& x) {
  const double l2 = lambda * lambda;
  const double den = l2 + 1.0 + x.z() * (l2 - 1.0);
  return {2.0 * lambda * x.x() / den, 2.0 * lambda * x.y() / den, (l2 - 1.0 + x.z() * (l2 + 1.0)) / den};
}

LinearStructure sphere() {
  Diffeomorphism d;
  d.name = "sphere";
  d.dim = 2;
  d.forward = [](std::span<const Jet> z) {
    const Jet rho = numcore::sqrt(z[0] * z[0] + z[1] * z[1]);
    Jet theta = 2.0 * numcore::atan2(Jet(1.0), rho);
    Jet angle = numcore::atan2(z[1], z[0]);
    if (angle.value() < 0.0) angle += kTwoPi;
    return std::vector<Jet>{theta, angle};
  };
  d.inverse = [](std::span<const Jet> s) {
    const Jet half = 0.5 * s[0];
    const Jet c = numcore::cos(half) / numcore::sin(half);
    return std::vector<Jet>{c * numcore::cos(s[1]), c * numcore::sin(s[1])};
  };
  d.contains = [](const Point& s) {
    return s[0] > 0.0 && s[0] <= std::numbers::pi && std::isfinite(s[1]);
  };
  d.distance = [](const Point& a, const Point& b) { return (sphere_embed(a) - sphere_embed(b)).norm(); };
  d.sample_lo = {0.3, 0.0};
  d.sample_hi = {std::numbers::pi - 0.3, kTwoPi};

  LinearStructure l{d, {}, {}, {}};
  l.add_rule = [](const Point& u, const Point& v) {
    const double c1 = 1.0 / std::tan(0.5 * u[0]);
    const double c2 = 1.0 / std::tan(0.5 * v[0]);
    // rho^2 = c1^2 + c2^2 + 2 c1 c2 cos(phi1 - phi2), taken as the length of
    // the component sum; the squared form cancels badly near v = -u.
    const double x = c1 * std::cos(u[1]) + c2 * std::cos(v[1]);
    const double y = c1 * std::sin(u[1]) + c2 * std::sin(v[1]);
    return Point{2.0 * std::atan2(1.0, std::hypot(x, y)), wrap_angle(std::atan2(y, x))};
  };
  l.scale_rule = [](double s, const Point& u) {
    double c = s / std::tan(0.5 * u[0]);
    double angle = u[1];
    if (c < 0.0) {
      c = -c;
      angle += std::numbers::pi;
    }
    return Point{2.0 * std::atan2(1.0, c), wrap_angle(angle)};
  };
  return l;
}

Point ho_K_add_closed(double lambda, const Point& u, const Point& v) {
  const double k1 = numcore::solve_K(lambda, std::hypot(u[0], u[1]));
  const double k2 = numcore::solve_K(lambda, std::hypot(v[0], v[1]));
  const double w0 = k1 * u[0] + k2 * v[0];
  const double w1 = k1 * u[1] + k2 * v[1];
  const double s = 1.0 + lambda * (w0 * w0 + w1 * w1);
  return {s * w0, s * w1};
}

numcore::Matrix ho_A(double lambda, double Q, double P) {
  numcore::Matrix a(2, 2);
  a << 1.0 + lambda * (3.0 * Q * Q + P * P), 2.0 * lambda * Q * P, 2.0 * lambda * Q * P,
      1.0 + lambda * (Q * Q + 3.0 * P * P);
  return a;
}

std::pair<geometry::VectorField, geometry::VectorField> ho_basis_fields(double lambda) {
  const auto l = ho_K(lambda);
  return {geometry::pushforward(l.phi, geometry::VectorField::constant(Eigen::Vector2d(1.0, 0.0))),
          geometry::pushforward(l.phi, geometry::VectorField::constant(Eigen::Vector2d(0.0, 1.0)))};
}

std::vector<std::string> catalog_names() { return {"standard", "ho_K", "magnetic", "tanh", "exp", "cube", "sphere"}; }

LinearStructure catalog_make(const std::string& name, const CatalogParams& params) {
  if (name == "standard") return standard(params.n);
  if (name == "ho_K") return ho_K(params.lambda);
  if (name == "magnetic") {
    if (params.gauge == "symmetric") return magnetic(VectorPotential::symmetric({0.0, 0.0, params.B}));
    if (params.gauge == "general") return magnetic(VectorPotential::general());
    throw std::invalid_argument("unknown gauge '" + params.gauge + "' (symmetric | general)");
  }
  if (name == "tanh") return tanh_structure(params.n);
  if (name == "exp") return exp_structure(params.n);
  if (name == "cube") return cube_structure(params.n);
  if (name == "sphere") return sphere();
  throw UnknownName("unknown structure '" + name + "'");
}

PointMap liouville_closed_form(const std::string& name, const CatalogParams& params) {
  if (name == "standard") return [](const Point& x) { return x; };
  if (name == "ho_K") {
    const double lam = params.lambda;
    return [lam](const Point& x) {
      const double r = std::hypot(x[0], x[1]);
      const double k = numcore::solve_K(lam, r);
      const double r2 = k * k * r * r;  // R^2 in model coordinates
      const double f = (1.0 + 3.0 * lam * r2) / (1.0 + lam * r2);
      return Point{f * x[0], f * x[1]};
    };
  }
  if (name == "magnetic") {
    const VectorPotential a = params.gauge == "general" ? VectorPotential::general()
                                                        : VectorPotential::symmetric({0.0, 0.0, params.B});
    return [a](const Point& x) {
      // Q d/dQ + (U - A + Q^j d_j A) d/dU
      const auto q = numcore::seed(std::span<const double>(x.data(), 3), 1);
      const auto pot = a(q);
      Point out(6);
      for (std::size_t i = 0; i < 3; ++i) {
        double dir = 0.0;
        for (int j = 0; j < 3; ++j) dir += x[static_cast<std::size_t>(j)] * pot[i].partial({j});
        out[i] = x[i];
        out[3 + i] = x[3 + i] - pot[i].value() + dir;
      }
      return out;
    };
  }
  if (name == "tanh") {
    return [](const Point& x) {
      Point d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = (1.0 - x[i] * x[i]) * std::atanh(x[i]);
      return d;
    };
  }
  if (name == "exp") {
    return [](const Point& x) {
      Point d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] * std::log(x[i]);
      return d;
    };
  }
  if (name == "cube") {
    return [](const Point& x) {
      Point d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = 3.0 * x[i];
      return d;
    };
  }
  if (name == "sphere") return [](const Point& x) { return Point{-std::sin(x[0]), 0.0}; };
  return {};
}

}  // namespace altlin::linstruct
