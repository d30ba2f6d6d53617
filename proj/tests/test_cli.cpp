#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "altlin/dynamics.hpp"
#include "commands.hpp"

using namespace altlin;
using namespace altlin::cli;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the installed binary through the shell; stderr is discarded.
Result shell(const std::string& args) {
  const std::string cmd = std::string(ALTLIN_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Result in_process(std::vector<std::string> args) {
  args.insert(args.begin(), "altlin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "altlin_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("structure-check examples") {
  const auto tanh = shell("structure-check --name tanh --samples 1000 --seed 7");
  CHECK(tanh.code == 0);
  const Json j = Json::parse(tanh.out);
  CHECK(j["command"] == "structure-check");
  CHECK(j["params"]["seed"] == 7);
  CHECK(j["pass"] == true);
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("residual"));
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("pass"));
  }

  const auto cube = shell("structure-check --name cube");
  CHECK(cube.code == 0);
  CHECK(cube.out.find("not differentiable at 0") != std::string::npos);

  const auto ho = shell("structure-check --name ho_K --lambda 0.1");
  CHECK(ho.code == 0);
  CHECK(Json::parse(ho.out)["params"]["tol"] == 1e-8);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(shell("structure-check --name nonsense").code == 2);
  CHECK(shell("").code == 2);
  CHECK(shell("no-such-command").code == 2);
  CHECK(shell("structure-check").code == 2);
  CHECK(shell("magnetic-demo --B 0").code == 2);
  CHECK(shell("moyal-sweep --f q5").code == 2);
  CHECK(shell("moyal-sweep --order 4").code == 2);
  CHECK(shell("figure1 --lambda -0.1").code == 2);
  CHECK(shell("quantize-demo --N 48").code == 2);
  CHECK(shell("structure-check --name tanh --format xml").code == 2);
  CHECK(shell("structure-check --config /nonexistent/altlin.cfg --name tanh").code == 2);
}

TEST_CASE("failing checks exit with 1") {
  // an absurd tolerance cannot be met by the sampled residuals
  CHECK(shell("structure-check --name tanh --tol 1e-30").code == 1);
  CHECK(shell("figure1 --tol 1e-30").code == 1);
  // h = 0.5 is outside the asymptotic range of the commutator orders
  CHECK(shell("quantize-demo --N 32").code == 1);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const std::string cmd : {"structure-check --name sphere --samples 200", "liouville --name exp",
                                "darboux --name magnetic-general", "magnetic-demo --rows 11", "figure1",
                                "quantize-demo --lambda 0.2", "moyal-sweep --lambda 0.1"}) {
    CAPTURE(cmd);
    const auto a = shell(cmd);
    const auto b = shell(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("in-process runs match the binary") {
  const auto a = in_process({"darboux", "--name", "standard", "--n", "2"});
  const auto b = shell("darboux --name standard --n 2");
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
}

TEST_CASE("config file precedence: flags over file over defaults") {
  const auto cfg = scratch("precedence.cfg");
  {
    std::ofstream f(cfg);
    f << "# comment\nname = tanh\nsamples=64\nseed=3\n";
  }
  const Json j = Json::parse(shell("structure-check --config " + cfg.string() + " --seed 9").out);
  CHECK(j["params"]["name"] == "tanh");
  CHECK(j["params"]["samples"] == 64);
  CHECK(j["params"]["seed"] == 9);
  CHECK(j["params"]["tol"] == 1e-8);

  {
    std::ofstream f(cfg);
    f << "name tanh\n";
  }
  CHECK(shell("structure-check --config " + cfg.string()).code == 2);
}

TEST_CASE("magnetic-demo writes a trajectory that re-imports exactly") {
  const auto csv = scratch("orbit.csv");
  const auto r = shell("magnetic-demo --csv " + csv.string());
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  for (const auto& c : j["checks"]) {
    CAPTURE(c["name"].get<std::string>());
    CHECK(c["residual"].get<double>() < 1e-9);
  }
  bool exact = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "flow.generator_identity") exact = c["residual"] == 0.0 && c["tolerance"] == 0.0;
  }
  CHECK(exact);
  const std::string text = slurp(csv);
  CHECK(text.rfind("t,Q1,Q2,U1,U2,chi1,chi2,H\n", 0) == 0);
  const auto rows = dynamics::parse_trajectory_csv(text);
  CHECK(rows.size() == 101u);
  CHECK(dynamics::trajectory_csv(rows) == text);

  const auto as_csv = shell("magnetic-demo --format csv --rows 5");
  CHECK(as_csv.out.rfind("t,Q1,", 0) == 0);
}

TEST_CASE("figure1 bundles") {
  const auto r = shell("figure1");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("curve_id,t,q,p\n", 0) == 0);
  const auto out = scratch("fig1.csv");
  CHECK(shell("figure1 --lambda 0 --grid 3 -o " + out.string()).code == 0);
  const std::string text = slurp(out);
  // 3 x 3 seeds, two fields, 201 rows each
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 18 * 201);

  const Json lam0 = Json::parse(shell("figure1 --lambda 0 --format json").out);
  bool lines = false;
  for (const auto& c : lam0["checks"]) lines = lines || (c["name"] == "coordinate_lines_curvature" && c["pass"]);
  CHECK(lines);

  const auto curves = figure1_curves(0.1, 5, 1.0, 2.0, 200);
  CHECK(curves.size() == 50u);
  CHECK(figure1_report(curves, 0.1, 1e-8).pass());
  CHECK(figure1_max_curvature(curves) > 1e-3);
  CHECK(figure1_max_curvature(figure1_curves(1e-9, 5, 1.0, 2.0, 200)) < 1e-6);
}

TEST_CASE("quantize-demo defaults and the lambda = 0 table") {
  const auto r = shell("quantize-demo");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["params"]["N"] == 64);
  CHECK(j["norm_ratio_table"].size() == 3u);

  const Json z = Json::parse(shell("quantize-demo --lambda 0").out);
  for (const auto& row : z["norm_ratio_table"]) CHECK(row["ratio"] == 1.0);
}

TEST_CASE("moyal-sweep slope and CSV") {
  const Json j = Json::parse(shell("moyal-sweep").out);
  CHECK(std::abs(j["slope"].get<double>() - 2.0) < 0.05);
  CHECK(j["sweep"].size() == 9u);
  const auto csv = shell("moyal-sweep --format csv --points 4");
  CHECK(csv.out.rfind("hbar,deviation\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);

  // brackets of linear functions have no hbar correction at all
  const auto exact = Json::parse(shell("moyal-sweep --f q --g p").out);
  CHECK(exact["checks"][0]["name"] == "moyal_minus_poisson");
  CHECK(exact["pass"] == true);
}
