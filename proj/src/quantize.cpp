#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "altlin/errors.hpp"
#include "altlin/quantize.hpp"

namespace altlin::quantize {

namespace {

void put(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double take(std::string_view field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("state csv: bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string state_csv(const LatticeState& psi) {
  std::string out = "index,re,im\n";
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    put(out, psi.amp[i].real());
    out += ',';
    put(out, psi.amp[i].imag());
    out += '\n';
  }
  return out;
}

LatticeState parse_state_csv(const std::string& text, const LatticeGrid& g) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "index,re,im") throw std::invalid_argument("state csv: missing header");
  LatticeState psi(g);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("state csv: expected three fields");
    const std::string_view v(line);
    if (take(v.substr(0, c1)) != static_cast<double>(row)) throw std::invalid_argument("state csv: index out of order");
    if (row >= psi.amp.size()) throw std::invalid_argument("state csv: more rows than grid sites");
    psi.amp[row] = Complex(take(v.substr(c1 + 1, c2 - c1 - 1)), take(v.substr(c2 + 1)));
    ++row;
  }
  if (row != psi.amp.size()) throw std::invalid_argument("state csv: fewer rows than grid sites");
  return psi;
}

double measure_norm(const std::function<double(double)>& psi, double lambda, Measure which, const NormGrid& grid) {
  if (!(grid.h > 0.0) || !(grid.hi > grid.lo)) throw std::invalid_argument("measure_norm: bad grid");
  if (lambda < 0.0) throw DomainError("measure_norm: lambda must be >= 0");
  const auto steps = static_cast<long>(std::llround((grid.hi - grid.lo) / grid.h));
  double s = 0.0;
  for (long i = 0; i <= steps; ++i) {
    const double q = grid.lo + static_cast<double>(i) * grid.h;
    const double big_q = q * numcore::solve_K(lambda, std::abs(q));
    const double a = psi(big_q);
    const double w = which == Measure::kMu ? 1.0 : 1.0 / (1.0 + 3.0 * lambda * big_q * big_q);
    s += w * a * a;
  }
  return std::sqrt(s * grid.h);
}

LatticeState ladder_apply(Ladder which, const LatticeState& psi, double lambda, double hbar) {
  const LatticeGrid& g = psi.grid;
  if (g.d != 1) throw std::invalid_argument("ladder_apply needs a 1D grid");
  if (!(hbar > 0.0)) throw std::invalid_argument("ladder_apply: hbar must be positive");
  const auto n = static_cast<std::size_t>(g.n);
  const double norm = 1.0 / std::sqrt(2.0 * hbar);
  LatticeState out(g);
  out.weights = psi.weights;
  for (std::size_t j = 0; j < n; ++j) {
    const double q = g.coord(j, 0);
    const Complex d = (psi.amp[(j + 1) % n] - psi.amp[(j + n - 1) % n]) / (2.0 * g.h);
    switch (which) {
      case Ladder::kCreation:
        out.amp[j] = norm * (q * psi.amp[j] - hbar * d);
        break;
      case Ladder::kAnnihilation:
        out.amp[j] = norm * (q * psi.amp[j] + hbar * d);
        break;
      case Ladder::kCreationPrime: {
        const double k = numcore::solve_K(lambda, std::abs(q));
        out.amp[j] = norm * (k * q * psi.amp[j] - hbar * (1.0 + 3.0 * lambda * k * k * q * q) * d);
        break;
      }
    }
  }
  return out;
}

DensityMatrix projector(const StateVector& psi) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw DomainError("projector of a zero vector");
  return psi * psi.adjoint() / n2;
}

DensityMatrix pure_state_compose(const DensityMatrix& rho1, const DensityMatrix& rho2, Complex c1, Complex c2,
                                 const StateVector& psi0) {
  const auto n = psi0.size();
  if (rho1.rows() != n || rho1.cols() != n || rho2.rows() != n || rho2.cols() != n) {
    throw DimensionError("pure_state_compose: size mismatch");
  }
  const StateVector v1 = rho1 * psi0;
  const StateVector v2 = rho2 * psi0;
  const double scale = psi0.norm();
  const double eps = 1e-12 * std::max(scale, 1e-300);
  if (c1 != 0.0 && v1.norm() <= eps) throw OrthogonalFiducial("first state is orthogonal to the fiducial vector");
  if (c2 != 0.0 && v2.norm() <= eps) throw OrthogonalFiducial("second state is orthogonal to the fiducial vector");
  const StateVector psi = c1 * v1 + c2 * v2;
  if (psi.norm() <= eps) throw OrthogonalFiducial("composed vector vanishes");
  return projector(psi);
}

double purity_residual(const DensityMatrix& rho) {
  const double idem = (rho * rho - rho).cwiseAbs().maxCoeff();
  const double tr = std::abs(rho.trace() - Complex(1.0));
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  return std::max({idem, tr, herm});
}

std::vector<NormRow> norm_ratio_table(double lambda, const std::vector<double>& widths, const NormGrid& grid) {
  std::vector<NormRow> rows;
  for (double sigma : widths) {
    auto psi = [sigma](double q) { return std::exp(-q * q / (2.0 * sigma * sigma)); };
    NormRow row;
    row.sigma = sigma;
    row.norm_mu = measure_norm(psi, lambda, Measure::kMu, grid);
    row.norm_mu_prime = measure_norm(psi, lambda, Measure::kMuPrime, grid);
    row.ratio = row.norm_mu / row.norm_mu_prime;
    rows.push_back(row);
  }
  return rows;
}

Report norm_ratio_report(double lambda, const std::vector<double>& widths) {
  if (widths.size() < 2) throw std::invalid_argument("norm_ratio_report needs two widths");
  const auto rows = norm_ratio_table(lambda, widths);
  Report r;
  for (const auto& row : rows) r.info["ratio_sigma_" + std::to_string(row.sigma)] = std::to_string(row.ratio);
  if (lambda == 0.0) {
    double dev = 0.0;
    for (const auto& row : rows) dev = std::max(dev, std::abs(row.ratio - 1.0));
    r.add("norm_ratio_constant", dev, 1e-10, "lambda = 0: both measures agree");
  } else {
    const double spread = std::abs(rows.back().ratio - rows.front().ratio) / std::min(rows.back().ratio, rows.front().ratio);
    r.info["norm_ratio_spread"] = std::to_string(spread);
    r.add("norm_ratio_spread_shortfall", std::max(0.0, 0.10 - spread), 0.0,
          "relative spread " + std::to_string(spread) + " must exceed 0.10");
  }
  return r;
}

Report ladder_suite(double lambda, double hbar, const LatticeGrid& grid) {
  if (grid.d != 1) throw std::invalid_argument("ladder_suite needs a 1D grid");
  const double h2 = grid.h * grid.h;
  const LatticeState ground = sample_state(grid, [hbar](const double* q) { return Complex(std::exp(-q[0] * q[0] / (2 * hbar))); });
  const LatticeState up = ladder_apply(Ladder::kCreation, ground, lambda, hbar);
  double excited = 0.0;
  for (std::size_t j = 0; j < up.amp.size(); ++j) {
    const double q = grid.coord(j, 0);
    excited = std::max(excited, std::abs(up.amp[j] - std::sqrt(2.0 / hbar) * q * ground.amp[j]));
  }
  Report r;
  r.info["h"] = std::to_string(grid.h);
  r.add("creation_on_ground", excited, h2, "a^dagger psi0 = sqrt(2 / hbar) q psi0, O(h^2)");

  const LatticeState phi = sample_state(grid, [](const double* q) {
    return std::exp(-(q[0] - 0.5) * (q[0] - 0.5)) * std::exp(Complex(0.0, 0.8 * q[0]));
  });
  const LatticeState psi = sample_state(grid, [](const double* q) { return Complex(q[0], 1.0) * std::exp(-q[0] * q[0] / 1.5); });
  const Complex lhs = ladder_apply(Ladder::kAnnihilation, psi, lambda, hbar).inner(phi);
  const Complex rhs = psi.inner(ladder_apply(Ladder::kCreation, phi, lambda, hbar));
  r.add("ladder_adjoint", std::abs(lhs - rhs), h2, "<a psi, phi> - <psi, a^dagger phi>");

  if (lambda == 0.0) {
    const LatticeState prime = ladder_apply(Ladder::kCreationPrime, phi, 0.0, hbar);
    const LatticeState plain = ladder_apply(Ladder::kCreation, phi, 0.0, hbar);
    double d = 0.0;
    for (std::size_t j = 0; j < prime.amp.size(); ++j) d = std::max(d, std::abs(prime.amp[j] - plain.amp[j]));
    r.add("creation_prime_reduces", d, 0.0, "lambda = 0: K = 1");
  }
  return r;
}

Report pure_state_suite(int count, int max_dim, std::uint64_t seed, double tol) {
  if (max_dim < 2) throw std::invalid_argument("pure_state_suite needs max_dim >= 2");
  numcore::Rng rng(seed);
  auto rand_vec = [&](int n) {
    StateVector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return v;
  };
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    const int n = 2 + k % (max_dim - 1);
    const DensityMatrix r1 = projector(rand_vec(n));
    const DensityMatrix r2 = projector(rand_vec(n));
    const Complex c1(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Complex c2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    worst = std::max(worst, purity_residual(pure_state_compose(r1, r2, c1, c2, rand_vec(n))));
  }
  Report r;
  r.add("pure_state_purity", worst, tol, std::to_string(count) + " random inputs, dim 2.." + std::to_string(max_dim));

  StateVector e0 = StateVector::Zero(2), e1 = StateVector::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  bool refused = false;
  try {
    pure_state_compose(projector(e1), projector(e0), 1.0, 0.0, e0);
  } catch (const OrthogonalFiducial&) {
    refused = true;
  }
  r.flag("orthogonal_fiducial_refused", refused, "rho1 = |1><1|, psi0 = |0>");

  const double idem = (pure_state_compose(projector(e0), projector(e0), Complex(0.3, 0.2), Complex(-1.1, 0.4), e0) -
                       projector(e0)).cwiseAbs().maxCoeff();
  r.add("idempotent_composition", idem, tol, "rho1 = rho2 = |0><0|");

  StateVector fid(2);
  fid << 1.0, 1.0;
  const DensityMatrix a = pure_state_compose(projector(e0), projector(e1), 1.0, 1.0, fid);
  const DensityMatrix b = pure_state_compose(projector(e0), projector(e1), 1.0, -1.0, fid);
  r.flag("relative_phase_matters", (a - b).cwiseAbs().maxCoeff() > 0.5, "c1 / c2 = 1 and -1 give different states");
  return r;
}

}  // namespace altlin::quantize
