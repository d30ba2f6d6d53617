// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "altlin/dynamics.hpp"
#include "altlin/lagrangian.hpp"
#include "altlin/linstruct.hpp"
#include "altlin/moyal.hpp"
#include "altlin/quantize.hpp"
#include "commands.hpp"
#include "poly_oracle.hpp"

using namespace altlin;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Folds a report into an outcome, remembering the first failing check.
void absorb(Outcome& o, const Report& r, const std::string& label) {
  for (const auto& c : r.checks) {
    if (!c.pass && o.pass) {
      o.pass = false;
      o.detail = label + ": " + c.name + " residual " + std::to_string(c.residual) + " > " + std::to_string(c.tolerance);
    }
  }
}

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

struct CatalogEntry {
  std::string name;
  linstruct::CatalogParams params;
  std::string label;
};

std::vector<CatalogEntry> catalog() {
  return {{"standard", {3}, "standard"},
          {"ho_K", {1, 0.0}, "ho_K(0)"},
          {"ho_K", {1, 0.1}, "ho_K(0.1)"},
          {"ho_K", {1, 1.0}, "ho_K(1)"},
          {"magnetic", {1, 0.1, 1.0, "symmetric"}, "magnetic(const B)"},
          {"magnetic", {1, 0.1, 1.0, "general"}, "magnetic(0,q1q3,0)"},
          {"tanh", {2}, "tanh"},
          {"exp", {2}, "exp"},
          {"cube", {2}, "cube"},
          {"sphere", {}, "sphere"}};
}

Outcome axioms() {
  Outcome o;
  for (const auto& e : catalog()) {
    linstruct::AxiomOptions opt;
    opt.samples = 1000;
    opt.tol = numcore::Tolerance(1e-8, 0.0);
    const auto r = linstruct::ls_axiom_report(linstruct::catalog_make(e.name, e.params), opt);
    require(o, opt.samples >= 1000 && r.checks.size() >= 5, e.label + ": incomplete report");
    absorb(o, r, e.label);
  }
  if (o.pass) o.detail = "10 structures, 1000 samples, tol 1e-8";
  return o;
}

Outcome liouville() {
  Outcome o;
  int closed = 0;
  for (const auto& e : catalog()) {
    linstruct::LiouvilleOptions opt;
    opt.samples = 100;
    opt.tol_pushforward = 1e-9;
    opt.tol_flow = 1e-6;
    opt.tol_closed = 1e-10;
    const auto cf = linstruct::liouville_closed_form(e.name, e.params);
    const auto r = linstruct::liouville_report(linstruct::catalog_make(e.name, e.params), opt, cf);
    absorb(o, r, e.label);
    require(o, r.find("liouville_vs_pushforward") && r.find("liouville_vs_flow_difference"), e.label + ": missing check");
    if (e.name == "tanh" || e.name == "exp" || e.name == "sphere") {
      require(o, r.find("liouville_closed_form") != nullptr, e.label + ": closed form not compared");
      ++closed;
    }
  }
  require(o, closed == 3, "closed forms not all exercised");
  if (o.pass) o.detail = "pushforward 1e-9, flow 1e-6, closed forms tanh/exp/sphere 1e-10 at 100 points";
  return o;
}

Outcome darboux() {
  Outcome o;
  for (const auto& name : {"standard", "magnetic-symmetric", "magnetic-general"}) {
    lagrangian::DarbouxOptions opt;
    opt.samples = 100;
    opt.tol = 1e-8;
    const auto r = lagrangian::darboux_check(lagrangian::lagrangian_make(name), opt);
    for (const char* k : {"frame_brackets", "closed_alpha", "closed_beta", "omega_minus_beta_wedge_alpha", "duality"}) {
      require(o, r.find(k) != nullptr, std::string(name) + ": missing " + k);
    }
    absorb(o, r, name);
  }
  if (o.pass) o.detail = "standard and both magnetic Lagrangians, 100 points, tol 1e-8";
  return o;
}

Outcome propagator() {
  Outcome o;
  for (double b : {0.5, 1.0, 2.0}) {
    dynamics::PropagatorSuiteOptions opt;
    opt.rk4_steps = 10000;
    const auto r = dynamics::propagator_suite(b, dynamics::Vector4(1.0, 0.0, 0.0, 1.0), opt);
    const std::string label = "B=" + std::to_string(b);
    const Check* need[] = {r.find("propagator_vs_mat_exp"), r.find("F0_identity"), r.find("generator_identity"),
                           r.find("propagator_symplectic"), r.find("chi_drift_exact"), r.find("chi_drift_rk4")};
    for (const Check* c : need) require(o, c != nullptr, label + ": missing check");
    if (!o.pass) break;
    require(o, need[0]->tolerance <= 1e-10 && need[3]->tolerance <= 1e-11 && need[4]->tolerance <= 1e-10 &&
                   need[5]->tolerance <= 1e-7,
            label + ": tolerance looser than required");
    require(o, need[1]->residual == 0.0 && need[2]->residual == 0.0, label + ": exact identities not exact");
    absorb(o, r, label);
  }
  if (o.pass) o.detail = "B in {0.5, 1, 2}: mat_exp on [0, 20/B], F(0) = I and generator identity exact, RK4 1e4 steps";
  return o;
}

Outcome weyl() {
  Outcome o;
  quantize::WeylSuiteOptions w;
  w.n = 64;
  w.pairs = 50;
  w.tol_unitary = 1e-12;
  w.tol_phase = 1e-11;
  w.tol_symplectic = 1e-11;
  absorb(o, quantize::weyl_suite(w), "weyl");
  quantize::CommutatorOptions c;
  c.min_order = 1.8;
  const auto r = quantize::hamiltonian_comm_check(1.0, quantize::LatticeGrid::centered(64, 16.0, 2), 1.0, c);
  absorb(o, r, "commutators");
  if (o.pass) {
    o.detail = "unitary 1e-12, 50 phases 1e-11, symplectic 1e-11, orders";
    for (const char* k : {"U1_H", "U2_H", "Q1_H", "Q2_H"}) o.detail += " " + r.info.at(std::string(k) + "_order");
  }
  return o;
}

Outcome moyal_criterion() {
  Outcome o;
  moyal::MoyalSuiteOptions opt;
  opt.lambda = 0.1;
  opt.points = 100;
  opt.tol = 1e-9;
  const auto r = moyal::moyal_suite(opt);
  for (const char* k : {"q_star_p", "bracket_q2_p2", "bracket_q3_p3", "hbar_slope", "fg_scaling_residual"}) {
    require(o, r.find(k) != nullptr, std::string("missing ") + k);
  }
  absorb(o, r, "moyal");
  require(o, r.find("q_star_p")->residual == 0.0 && r.find("bracket_q2_p2")->residual == 0.0,
          "q*p or {q^2, p^2} not exact");
  // coefficient of {q^3, p^3} against the independent polynomial expansion
  using oracle::Poly;
  for (double hbar : {1.0, 0.37}) {
    const Poly b = oracle::oracle_bracket(Poly{{{3, 0}, 1.0}}, Poly{{{0, 3}, 1.0}}, hbar);
    const auto m = moyal::moyal_bracket(moyal::named_function("q3"), moyal::named_function("p3"), {hbar, 3});
    for (const auto& x : numcore::sample_box({-2, -2}, {2, 2}, 50, 19)) {
      const double want = (oracle::eval(b, x) / oracle::Complex(0.0, hbar)).real();
      require(o, std::abs(numcore::evaluate(m, x) - want) < 1e-12, "{q^3, p^3} disagrees with the oracle");
    }
  }
  if (o.pass) o.detail = "exact q*p and {q^2,p^2}, {q^3,p^3} = oracle, slope " + r.info.at("hbar_slope") + ", scaling 1e-9";
  return o;
}

Outcome nonequivalence() {
  Outcome o;
  const auto r = quantize::norm_ratio_report(0.1, {0.5, 2.0});
  absorb(o, r, "lambda 0.1");
  const auto rows = quantize::norm_ratio_table(0.1, {0.5, 2.0});
  const double spread = std::abs(rows[1].ratio - rows[0].ratio) / std::min(rows[0].ratio, rows[1].ratio);
  require(o, spread > 0.10, "spread below 10%");
  double dev = 0.0;
  for (const auto& row : quantize::norm_ratio_table(0.0, {0.5, 2.0})) dev = std::max(dev, std::abs(row.ratio - 1.0));
  require(o, dev <= 1e-10, "lambda 0 ratios differ");
  if (o.pass) {
    o.detail = "ratios " + std::to_string(rows[0].ratio) + " vs " + std::to_string(rows[1].ratio) + " (spread " +
               std::to_string(100 * spread) + "%), lambda 0 deviation " + std::to_string(dev);
  }
  return o;
}

Outcome pure_states() {
  Outcome o;
  const auto r = quantize::pure_state_suite(100, 8, 3, 1e-12);
  require(o, r.find("pure_state_purity") && r.find("orthogonal_fiducial_refused"), "missing check");
  absorb(o, r, "pure states");
  if (o.pass) o.detail = "100 inputs dim 2..8 to 1e-12, orthogonal fiducial refused";
  return o;
}

Outcome figure1() {
  Outcome o;
  const auto lam0 = cli::figure1_curves(0.0, 5, 1.0, 2.0, 200);
  absorb(o, cli::figure1_report(lam0, 0.0, 1e-8), "lambda 0");
  require(o, cli::figure1_report(lam0, 0.0, 1e-8).find("coordinate_lines_curvature") != nullptr, "no curvature check");
  const double k_small = cli::figure1_max_curvature(cli::figure1_curves(1e-9, 5, 1.0, 2.0, 200));
  require(o, k_small < 1e-6, "lambda 1e-9 curves bend: " + std::to_string(k_small));
  const auto lam = cli::figure1_curves(0.1, 5, 1.0, 2.0, 200);
  const auto r = cli::figure1_report(lam, 0.1, 1e-8);
  absorb(o, r, "lambda 0.1");
  require(o, r.find("field_equation_residual") != nullptr, "no field-equation check");
  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "lambda->0 curvature %.1e, lambda 0.1 field residual %.1e over %zu curves", k_small,
                  r.find("field_equation_residual")->residual, lam.size());
    o.detail = buf;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom suite", axioms},
      {"Liouville consistency", liouville},
      {"Darboux suite", darboux},
      {"propagator suite", propagator},
      {"Weyl suite", weyl},
      {"Moyal suite", moyal_criterion},
      {"nonequivalence of measures", nonequivalence},
      {"pure-state suite", pure_states},
      {"Figure 1 curves", figure1},
  };
  const auto start = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
