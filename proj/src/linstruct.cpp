#include "altlin/linstruct.hpp"

#include <array>
#include <cmath>
#include <string>

#include "altlin/errors.hpp"

namespace altlin::linstruct {

using numcore::Jet;
using numcore::JetLayout;

double Diffeomorphism::dist(const Point& a, const Point& b) const {
  if (distance) return distance(a, b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Point Diffeomorphism::to_model(const Point& m) const {
  if (static_cast<int>(m.size()) != dim) throw DimensionError(name + ": point has wrong dimension");
  if (!in_domain(m)) throw DomainError(name + ": point outside the chart");
  return numcore::evaluate(inverse, m);
}

Point Diffeomorphism::to_manifold(const Point& e) const {
  if (static_cast<int>(e.size()) != dim) throw DimensionError(name + ": point has wrong dimension");
  Point m = numcore::evaluate(forward, e);
  if (!in_domain(m)) throw DomainError(name + ": image left the chart");
  return m;
}

Diffeomorphism Diffeomorphism::then(const Diffeomorphism& outer) const {
  if (outer.dim != dim) throw DimensionError("composition of maps with different dimensions");
  Diffeomorphism d = outer;
  d.name = outer.name + "*" + name;
  d.forward = [inner = forward, f = outer.forward](std::span<const Jet> x) {
    const auto mid = inner(x);
    return f(mid);
  };
  d.inverse = [inner = inverse, g = outer.inverse](std::span<const Jet> y) {
    const auto mid = g(y);
    return inner(mid);
  };
  return d;
}

Diffeomorphism Diffeomorphism::identity(int dim) {
  Diffeomorphism d;
  d.name = "identity";
  d.dim = dim;
  d.forward = [](std::span<const Jet> x) { return std::vector<Jet>(x.begin(), x.end()); };
  d.inverse = d.forward;
  d.sample_lo.assign(static_cast<std::size_t>(dim), -2.0);
  d.sample_hi.assign(static_cast<std::size_t>(dim), 2.0);
  return d;
}

namespace {

void require_domain(const LinearStructure& l, const Point& u) {
  if (static_cast<int>(u.size()) != l.dim()) throw DimensionError(l.name() + ": point has wrong dimension");
  if (!l.phi.in_domain(u)) throw DomainError(l.name() + ": point outside the structure's domain");
}

}  // namespace

Point ls_add_generic(const LinearStructure& l, const Point& u, const Point& v) {
  Point a = l.phi.to_model(u);
  const Point b = l.phi.to_model(v);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return l.phi.to_manifold(a);
}

Point ls_sub_generic(const LinearStructure& l, const Point& u, const Point& v) {
  Point a = l.phi.to_model(u);
  const Point b = l.phi.to_model(v);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return l.phi.to_manifold(a);
}

Point ls_scale_generic(const LinearStructure& l, double lambda, const Point& u) {
  Point a = l.phi.to_model(u);
  for (auto& x : a) x *= lambda;
  return l.phi.to_manifold(a);
}

Point ls_add(const LinearStructure& l, const Point& u, const Point& v) {
  require_domain(l, u);
  require_domain(l, v);
  if (!l.add_rule) return ls_add_generic(l, u, v);
  Point r = l.add_rule(u, v);
  if (!l.phi.in_domain(r)) throw DomainError(l.name() + ": sum left the domain");
  return r;
}

Point ls_scale(const LinearStructure& l, double lambda, const Point& u) {
  require_domain(l, u);
  if (!l.scale_rule) return ls_scale_generic(l, lambda, u);
  Point r = l.scale_rule(lambda, u);
  if (!l.phi.in_domain(r)) throw DomainError(l.name() + ": multiple left the domain");
  return r;
}

Point ls_origin(const LinearStructure& l) { return l.phi.to_manifold(Point(static_cast<std::size_t>(l.dim()), 0.0)); }

Point ls_flow(const LinearStructure& l, const Point& u, double t) { return ls_scale_generic(l, std::exp(t), u); }

Point ls_liouville(const LinearStructure& l, const Point& u) {
  require_domain(l, u);
  if (!l.phi.is_regular(u)) {
    throw NotDifferentiable(l.name() + ": Liouville field undefined here (inverse map not differentiable)");
  }
  const Point x = l.phi.to_model(u);
  auto layout = JetLayout::get(1, 1);
  const Jet scale = numcore::exp(Jet::variable(layout, 0, 0.0));
  std::vector<Jet> arg;
  arg.reserve(x.size());
  for (double xi : x) arg.push_back(scale * xi);
  const auto y = l.phi.forward(arg);
  Point d(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[i].is_constant() ? 0.0 : y[i].partial({0});
  return d;
}

geometry::VectorField liouville_field(const LinearStructure& l) {
  return geometry::pushforward(l.phi, geometry::VectorField::liouville(l.dim()));
}

std::vector<Point> sample_domain(const Diffeomorphism& phi, int count, std::uint64_t seed) {
  if (phi.sample_lo.size() != static_cast<std::size_t>(phi.dim) || phi.sample_hi.size() != phi.sample_lo.size()) {
    throw DimensionError(phi.name + ": no sample box");
  }
  numcore::Rng rng(seed);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  Point p(static_cast<std::size_t>(phi.dim));
  for (int k = 0; k < count; ++k) {
    int tries = 0;
    do {
      if (++tries > 10000) throw DomainError(phi.name + ": sample box misses the domain");
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(phi.sample_lo[i], phi.sample_hi[i]);
    } while (!phi.in_domain(p));
    out.push_back(p);
  }
  return out;
}

Report liouville_report(const LinearStructure& l, const LiouvilleOptions& opt, const PointMap& closed) {
  const auto pts = sample_domain(l.phi, opt.samples, opt.seed);
  const auto field = liouville_field(l);
  const std::size_t n = pts.size();
  std::vector<double> push(n, 0.0), flow(n, 0.0), cf(n, 0.0);
  std::vector<char> skipped(n, 0);
  for_each_index(n, opt.exec, [&](std::size_t i) {
    const Point& u = pts[i];
    if (!l.phi.is_regular(u)) {
      skipped[i] = 1;
      return;
    }
    const Point d = ls_liouville(l, u);
    const Point p = field.at(u);
    const Point fwd = ls_flow(l, u, opt.fd_step);
    const Point bwd = ls_flow(l, u, -opt.fd_step);
    const Point c = closed ? closed(u) : Point{};
    for (std::size_t k = 0; k < d.size(); ++k) {
      push[i] = std::max(push[i], std::abs(d[k] - p[k]));
      flow[i] = std::max(flow[i], std::abs(d[k] - (fwd[k] - bwd[k]) / (2.0 * opt.fd_step)));
      if (closed) cf[i] = std::max(cf[i], std::abs(d[k] - c[k]));
    }
  });
  double mp = 0.0, mf = 0.0, mc = 0.0;
  int skip = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mp = std::max(mp, push[i]);
    mf = std::max(mf, flow[i]);
    mc = std::max(mc, cf[i]);
    skip += skipped[i];
  }
  Report r;
  r.info["structure"] = l.name();
  r.info["samples"] = std::to_string(n);
  r.add("liouville_vs_pushforward", mp, opt.tol_pushforward, "jet dilation vs phi_* of x d/dx");
  r.add("liouville_vs_flow_difference", mf, opt.tol_flow, "central difference of the dilation flow at t = 0");
  if (closed) r.add("liouville_closed_form", mc, opt.tol_closed);
  if (skip > 0) r.info["skipped_nonregular"] = std::to_string(skip);
  if (!l.phi.is_regular(ls_origin(l))) {
    r.info["origin"] = "not differentiable at 0";
  }
  return r;
}

Report ls_axiom_report(const LinearStructure& l, const AxiomOptions& opt) {
  static const std::array<const char*, 9> kNames = {
      "associativity", "commutativity", "scalar_compatibility", "distributivity_vectors",
      "distributivity_scalars", "neutral_element", "unit_scalar", "additive_inverse", "zero_scalar"};
  constexpr std::size_t kAxioms = kNames.size();

  // Inputs are drawn serially so the report does not depend on scheduling.
  const auto points = sample_domain(l.phi, 3 * opt.samples, opt.seed);
  numcore::Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<double, double>> scalars(static_cast<std::size_t>(opt.samples));
  for (auto& s : scalars) {
    s.first = rng.uniform(opt.scalar_lo, opt.scalar_hi);
    s.second = rng.uniform(opt.scalar_lo, opt.scalar_hi);
  }
  const Point origin = ls_origin(l);

  struct Row {
    std::array<double, kAxioms> residual{};
    std::array<bool, kAxioms> ok{};
  };
  std::vector<Row> rows(static_cast<std::size_t>(opt.samples));

  for_each_index(rows.size(), opt.exec, [&](std::size_t k) {
    const Point& u = points[3 * k];
    const Point& v = points[3 * k + 1];
    const Point& w = points[3 * k + 2];
    const auto [a, b] = scalars[k];
    auto add = [&](const Point& x, const Point& y) { return ls_add(l, x, y); };
    auto mul = [&](double s, const Point& x) { return ls_scale(l, s, x); };
    Row& row = rows[k];
    auto record = [&](std::size_t i, const Point& x, const Point& y) {
      const double d = l.phi.dist(x, y);
      double size = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) size = std::max({size, std::abs(x[j]), std::abs(y[j])});
      row.residual[i] = d;
      row.ok[i] = std::isfinite(d) && d <= opt.tol.abs + opt.tol.rel * size;
    };
    record(0, add(add(u, v), w), add(u, add(v, w)));
    record(1, add(u, v), add(v, u));
    record(2, mul(a, mul(b, u)), mul(a * b, u));
    record(3, mul(a, add(u, v)), add(mul(a, u), mul(a, v)));
    record(4, mul(a + b, u), add(mul(a, u), mul(b, u)));
    record(5, add(u, origin), u);
    record(6, mul(1.0, u), u);
    record(7, add(u, mul(-1.0, u)), origin);
    record(8, mul(0.0, u), origin);
  });

  Report report;
  report.info["structure"] = l.name();
  report.info["samples"] = std::to_string(opt.samples);
  for (std::size_t i = 0; i < kAxioms; ++i) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& row : rows) {
      worst = std::max(worst, row.residual[i]);
      ok = ok && row.ok[i];
    }
    report.add(kNames[i], worst, opt.tol.abs).pass = ok;
  }

  // The dilation field vanishes at the origin; maps that are not
  // differentiable there are flagged instead.
  try {
    const Point d = ls_liouville(l, origin);
    double n = 0.0;
    for (double x : d) n = std::max(n, std::abs(x));
    report.add("liouville_origin", n, opt.tol.abs);
  } catch (const NotDifferentiable&) {
    report.flag("liouville_origin", true, "not differentiable at 0");
  }
  return report;
}

Point magnetic_sub(const LinearStructure& l, const Point& u, const Point& v) {
  if (!l.sub_rule) throw std::invalid_argument("magnetic_sub needs a magnetic structure, got " + l.name());
  require_domain(l, u);
  require_domain(l, v);
  return l.sub_rule(u, v);
}

}  // namespace altlin::linstruct
