#include "altlin/lagrangian.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "altlin/errors.hpp"
#include "altlin/linstruct.hpp"

namespace altlin::lagrangian {

using numcore::Jet;
using numcore::JetMatrix;
using numcore::lift;
using numcore::seed;
using numcore::values;

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

// Components of the frame along d/du: xk(j, k) = (X_j)^k, yk(j, k) = (Y^j)^k.
struct FrameJets {
  JetMatrix xk;
  JetMatrix yk;
};

FrameJets frame_jets(const Lagrangian& l, std::span<const Jet> x) {
  const int n = l.n;
  require_regular(l, values(x));
  const auto flat = lift(x, 2, [&](std::span<const Jet> local) {
    const Jet lag = l.L(local);
    std::vector<Jet> p;
    for (int i = 0; i < n; ++i) p.push_back(lag.derivative(n + i));
    JetMatrix h(n, n);
    JetMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        h(i, k) = p[at(i)].derivative(n + k);
        m(i, k) = p[at(i)].derivative(k);
      }
    }
    std::vector<Jet> out;
    out.reserve(at(2 * n * n));
    for (int j = 0; j < n; ++j) {
      std::vector<Jet> rhs;
      for (int i = 0; i < n; ++i) rhs.push_back(-m(i, j));
      for (auto& s : numcore::solve(h, rhs)) out.push_back(std::move(s));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<Jet> rhs(at(n), Jet(0.0));
      rhs[at(j)] = Jet(1.0);
      for (auto& s : numcore::solve(h, rhs)) out.push_back(std::move(s));
    }
    return out;
  });
  FrameJets f{JetMatrix(n, n), JetMatrix(n, n)};
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      f.xk(j, k) = flat[at(j * n + k)];
      f.yk(j, k) = flat[at(n * n + j * n + k)];
    }
  }
  return f;
}

// d(dL/du^i) as a one-form on R^2n.
OneForm momentum_differential(const Lagrangian& l, int i) {
  const int n = l.n;
  ScalarField p = [l, i, n](std::span<const Jet> x) {
    return lift(x, 1, [&](std::span<const Jet> local) { return std::vector<Jet>{l.L(local).derivative(n + i)}; })[0];
  };
  return geometry::differential(p, 2 * n);
}

}  // namespace

Lagrangian standard_lagrangian(int n, double k) {
  if (n < 1) throw std::invalid_argument("standard Lagrangian needs n >= 1");
  return {"standard", n,
          [n, k](std::span<const Jet> x) {
            Jet s(0.0);
            for (int i = 0; i < n; ++i) s += 0.5 * (x[at(n + i)] * x[at(n + i)]) - 0.5 * k * (x[at(i)] * x[at(i)]);
            return s;
          },
          std::nullopt};
}

Lagrangian magnetic_lagrangian(const VectorPotential& a) {
  return {"magnetic-" + a.name, 3,
          [a](std::span<const Jet> x) {
            const auto pot = a(x.subspan(0, 3));
            Jet s(0.0);
            for (std::size_t i = 0; i < 3; ++i) s += 0.5 * (x[3 + i] * x[3 + i]) + pot[i] * x[3 + i];
            return s;
          },
          a};
}

std::vector<std::string> lagrangian_names() { return {"standard", "magnetic-symmetric", "magnetic-general"}; }

Lagrangian lagrangian_make(const std::string& name, const LagrangianParams& params) {
  if (name == "standard") return standard_lagrangian(params.n, params.k);
  if (name == "magnetic-symmetric") return magnetic_lagrangian(VectorPotential::symmetric({0.0, 0.0, params.B}));
  if (name == "magnetic-general") return magnetic_lagrangian(VectorPotential::general());
  throw UnknownName("unknown Lagrangian '" + name + "'");
}

Matrix hessian(const Lagrangian& l, const Point& x) {
  const Jet j = numcore::jet_eval(l.L, x, 2);
  const int n = l.n;
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) h(i, k) = j.is_constant() ? 0.0 : j.partial({n + i, n + k});
  }
  return h;
}

double require_regular(const Lagrangian& l, const Point& x) {
  const Matrix h = hessian(l, x);
  Eigen::JacobiSVD<Matrix> svd(h);
  const auto& s = svd.singularValues();
  const double smax = s.maxCoeff();
  const double smin = s.minCoeff();
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxHessianCondition)) {
    throw DegenerateLagrangian(l.name + ": velocity Hessian is singular or ill-conditioned (condition " +
                               std::to_string(cond) + ")");
  }
  return cond;
}

OneForm cartan_form(const Lagrangian& l) {
  const int n = l.n;
  return {2 * n, [l, n](std::span<const Jet> x) {
            return lift(x, 1, [&](std::span<const Jet> local) {
              const Jet lag = l.L(local);
              std::vector<Jet> out(at(2 * n), Jet(0.0));
              for (int i = 0; i < n; ++i) out[at(i)] = lag.derivative(n + i);
              return out;
            });
          }};
}

TwoForm symplectic_form(const Lagrangian& l, double sign) {
  const TwoForm dtheta = geometry::exterior_d(cartan_form(l));
  return {l.dim(), [l, dtheta, sign](std::span<const Jet> x) {
            require_regular(l, values(x));
            JetMatrix w = dtheta(x);
            for (int i = 0; i < w.rows(); ++i) {
              for (int j = 0; j < w.cols(); ++j) w(i, j) *= sign;
            }
            return w;
          }};
}

ScalarField energy(const Lagrangian& l) {
  const int n = l.n;
  return [l, n](std::span<const Jet> x) {
    return lift(x, 1, [&](std::span<const Jet> local) {
      const int m = numcore::common_order(local) - 1;
      const Jet lag = l.L(local);
      Jet h = -lag.truncate(m);
      for (int i = 0; i < n; ++i) h += local[at(n + i)].truncate(m) * lag.derivative(n + i);
      return std::vector<Jet>{h};
    })[0];
  };
}

AdaptedFrame adapted_frame(const Lagrangian& l) {
  const int n = l.n;
  AdaptedFrame f;
  for (int j = 0; j < n; ++j) {
    f.X.push_back({2 * n, [l, j, n](std::span<const Jet> x) {
                     const auto fj = frame_jets(l, x);
                     std::vector<Jet> out(at(2 * n), Jet(0.0));
                     out[at(j)] = Jet(1.0);
                     for (int k = 0; k < n; ++k) out[at(n + k)] = fj.xk(j, k);
                     return out;
                   }});
    f.Y.push_back({2 * n, [l, j, n](std::span<const Jet> x) {
                     const auto fj = frame_jets(l, x);
                     std::vector<Jet> out(at(2 * n), Jet(0.0));
                     for (int k = 0; k < n; ++k) out[at(n + k)] = fj.yk(j, k);
                     return out;
                   }});
    numcore::Vector e = numcore::Vector::Zero(2 * n);
    e(j) = 1.0;
    f.alpha.push_back(OneForm::constant(e));
    f.beta.push_back(momentum_differential(l, j));
  }
  return f;
}

FrameValues adapted_frame_at(const Lagrangian& l, const Point& x) {
  const int n = l.n;
  const auto fj = frame_jets(l, seed(x, 0));
  const Jet lag = numcore::jet_eval(l.L, x, 2);
  FrameValues v{Matrix::Zero(2 * n, n), Matrix::Zero(2 * n, n), Matrix::Zero(n, 2 * n), Matrix::Zero(n, 2 * n)};
  for (int j = 0; j < n; ++j) {
    v.X(j, j) = 1.0;
    v.alpha(j, j) = 1.0;
    for (int k = 0; k < n; ++k) {
      v.X(n + k, j) = fj.xk(j, k).value();
      v.Y(n + k, j) = fj.yk(j, k).value();
    }
    for (int k = 0; k < 2 * n; ++k) v.beta(j, k) = lag.is_constant() ? 0.0 : lag.partial({n + j, k});
  }
  return v;
}

Report darboux_check(const Lagrangian& l, const DarbouxOptions& opt) {
  const int n = l.n;
  const int dim = 2 * n;
  const auto points = numcore::sample_box(Point(at(dim), -opt.box), Point(at(dim), opt.box), opt.samples, opt.seed);
  const AdaptedFrame frame = adapted_frame(l);
  const TwoForm omega = symplectic_form(l, opt.sign);

  std::vector<VectorField> fields = frame.X;
  fields.insert(fields.end(), frame.Y.begin(), frame.Y.end());
  std::vector<TwoForm> d_alpha;
  std::vector<TwoForm> d_beta;
  for (int i = 0; i < n; ++i) {
    d_alpha.push_back(geometry::exterior_d(frame.alpha[at(i)]));
    d_beta.push_back(geometry::exterior_d(frame.beta[at(i)]));
  }

  enum { kBrackets, kClosedAlpha, kClosedBeta, kOmega, kDuality, kInteriorX, kInteriorY, kCount };
  std::vector<std::array<double, kCount>> rows(points.size());

  for_each_index(points.size(), opt.exec, [&](std::size_t s) {
    const Point& x = points[s];
    auto& row = rows[s];
    row.fill(0.0);
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        for (double c : geometry::lie_bracket(fields[a], fields[b]).at(x)) row[kBrackets] = std::max(row[kBrackets], std::abs(c));
      }
    }
    for (int i = 0; i < n; ++i) {
      row[kClosedAlpha] = std::max(row[kClosedAlpha], d_alpha[at(i)].at(x).cwiseAbs().maxCoeff());
      row[kClosedBeta] = std::max(row[kClosedBeta], d_beta[at(i)].at(x).cwiseAbs().maxCoeff());
    }
    const FrameValues v = adapted_frame_at(l, x);
    const Matrix w = omega.at(x);
    const Matrix frame_form = opt.sign * (v.beta.transpose() * v.alpha - v.alpha.transpose() * v.beta);
    row[kOmega] = (w - frame_form).cwiseAbs().maxCoeff();
    const Matrix id = Matrix::Identity(n, n);
    row[kDuality] = std::max({(v.alpha * v.X - id).cwiseAbs().maxCoeff(), (v.alpha * v.Y).cwiseAbs().maxCoeff(),
                              (v.beta * v.Y - id).cwiseAbs().maxCoeff(), (v.beta * v.X).cwiseAbs().maxCoeff()});
    // Row j of X^T w is i_{X_j} omega.
    row[kInteriorX] = (v.X.transpose() * w + opt.sign * v.beta).cwiseAbs().maxCoeff();
    row[kInteriorY] = (v.Y.transpose() * w - opt.sign * v.alpha).cwiseAbs().maxCoeff();
  });

  static const std::array<const char*, kCount> names = {
      "frame_brackets", "closed_alpha", "closed_beta", "omega_minus_beta_wedge_alpha",
      "duality", "interior_X_plus_sign_beta", "interior_Y_minus_sign_alpha"};
  Report r;
  r.info["lagrangian"] = l.name;
  r.info["omega_sign"] = opt.sign < 0 ? "-1" : "+1";
  r.info["samples"] = std::to_string(opt.samples);
  for (int c = 0; c < kCount; ++c) {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, row[at(c)]);
    r.add(names[at(c)], worst, opt.tol);
  }
  return r;
}

linstruct::Diffeomorphism magnetic_chart(const VectorPotential& a) {
  auto d = linstruct::magnetic(a).phi;
  d.name = "magnetic_chart-" + a.name;
  return d;
}

VectorField magnetic_liouville(const VectorPotential& a) {
  return {6, [a](std::span<const Jet> x) {
            return lift(x, 1, [&](std::span<const Jet> local) {
              const int m = numcore::common_order(local) - 1;
              const auto pot = a(local.subspan(0, 3));
              std::vector<Jet> out;
              for (std::size_t i = 0; i < 3; ++i) out.push_back(local[i].truncate(m));
              for (std::size_t i = 0; i < 3; ++i) {
                Jet c = local[3 + i].truncate(m) - pot[i].truncate(m);
                for (int j = 0; j < 3; ++j) c += local[at(j)].truncate(m) * pot[i].derivative(j);
                out.push_back(c);
              }
              return out;
            });
          }};
}

}  // namespace altlin::lagrangian
