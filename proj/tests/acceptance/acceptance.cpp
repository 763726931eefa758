// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_support.hpp"
#include "utm/delta.hpp"
#include "utm/eigen.hpp"
#include "utm/identities.hpp"
#include "utm/oracle.hpp"
#include "utm/presets.hpp"
#include "utm/residuals.hpp"
#include "utm/solver.hpp"
#include "utm_cli/commands.hpp"
#include "utm_cli/emit.hpp"

using namespace utm;
using Json = nlohmann::json;

namespace {

// Tolerances.
constexpr double kEigComponentTol = 0.05;
constexpr double kKappaZeroTol = 1e-8;
constexpr double kDirichletKappaTol = 1e-10;
constexpr double kDeltaClosedFormTol = 1e-12;
constexpr double kFourierTol = 1e-6;
constexpr double kErfcTol = 1e-5;
constexpr double kGaussianTol = 1e-6;
constexpr double kRobinRelTol = 1e-3;
constexpr double kPdeFactor = 10.0;
constexpr double kBcTol = 1e-4;
constexpr double kIcTol = 1e-2;
constexpr double kComponentTol = 1e-6;
constexpr double kIcTime = 1e-4;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

const Domain unit = Domain::finite(0.0, 1.0);
BoundaryConditions dirichlet() { return BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}); }
BoundaryConditions neumann() { return BoundaryConditions::finite({0, 1, 0, 0}, {0, 0, 0, 1}); }
BoundaryConditions periodic() { return BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1}); }
BoundaryConditions robin() { return BoundaryConditions::finite({-1, 1, 0, 0}, {0, 0, 1, 1}); }

cli::CommandResult run(const std::string& command, const std::string& config, std::optional<int> nmax = {},
                       const std::string& oracle = "") {
  cli::RunOptions ro;
  ro.command = command;
  ro.config = test::config_path(config);
  ro.nmax = nmax;
  if (command == "eigs") ro.count = 5;
  ro.oracle = oracle;
  return cli::run_command(ro, cli::parse_config(ro.config));
}

std::vector<cli::CsvRow> rows_of(const std::string& csv) {
  std::istringstream in(csv);
  return cli::read_solution_csv(in);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void criterion1(Outcome& o) {
  const std::vector<std::vector<cplx>> table = {
      {{-42.012, 5.3928}, {-42.012, 5.3928}, {-171.05, 21.571}, {-171.05, 21.571}},
      {{-41.595, 3.3501}, {-41.671, 7.7097}, {-170.73, 19.949}, {-170.60, 23.434}},
      {{-41.585, 3.3356}, {-41.689, 7.7172}, {-170.70, 19.916}, {-170.63, 23.466}},
  };
  for (int N = 0; N <= 2; ++N) {
    cli::CommandResult r = run("eigs", "cgl.yaml", N);
    Json j = Json::parse(r.primary);
    std::vector<cplx> got;
    for (const auto& e : j) got.emplace_back(e["lambda_re"].get<double>(), e["lambda_im"].get<double>());
    o.require(r.exit_code == 0 && got.size() == 5, "N=" + std::to_string(N) + " count");
    if (got.empty()) continue;
    got.erase(got.begin());  // lambda_0
    double worst = 0.0;
    for (cplx want : table[N]) {
      auto it = std::min_element(got.begin(), got.end(),
                                 [&](cplx a, cplx b) { return std::abs(a - want) < std::abs(b - want); });
      if (it == got.end()) {
        worst = INFINITY;
        break;
      }
      worst = std::max({worst, std::abs(it->real() - want.real()), std::abs(it->imag() - want.imag())});
      got.erase(it);
    }
    o.detail << " N" << N << " max component error " << sci(worst) << ";";
    o.require(worst <= kEigComponentTol, "N=" + std::to_string(N));
  }
}

void criterion2(Outcome& o) {
  DispersionCache cache(make_preset("cgl"), unit);
  auto pairs = find_eigenvalues(periodic(), cache, default_region(cache, 5), 2);
  o.require(!pairs.empty(), "no roots");
  if (pairs.empty()) return;
  const double e = std::abs(pairs.front().kappa - I);
  o.detail << " |kappa0 - i| = " << sci(e) << ", lambda0 = " << pairs.front().lambda.real();
  o.require(e <= kKappaZeroTol, "kappa0");
}

void criterion3(Outcome& o) {
  DispersionCache cache(make_preset("constant"), unit);
  auto pairs = find_eigenvalues(dirichlet(), cache, SearchRegion{cplx(0.5, -0.5), cplx(26.5, 0.5)}, 2);
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.kappa.real() < b.kappa.real(); });
  o.require(pairs.size() == 8, "root count " + std::to_string(pairs.size()));
  double worst = 0.0;
  for (size_t m = 1; m <= std::min<size_t>(8, pairs.size()); ++m)
    worst = std::max(worst, std::abs(pairs[m - 1].kappa - double(m) * pi));
  o.require(worst <= kDirichletKappaTol, "kappa_m");

  std::mt19937_64 rng(2024);
  const ContourParams cp = contour_params(cache);
  double dworst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx k = test::contour_point(rng, cp);
    const cplx want = 2.0 * I * std::exp(I * k) * std::sin(k) / (k * k);
    dworst = std::max(dworst, test::rel_err(delta_at(SpectralParam::general(k), dirichlet(), cache, 4), want));
  }
  o.require(dworst <= kDeltaClosedFormTol, "Delta closed form");
  o.detail << " max |kappa_m - m pi| " << sci(worst) << "; Delta rel error " << sci(dworst);
}

double max_abs_diff(const std::vector<cli::CsvRow>& a, const std::vector<cli::CsvRow>& b) {
  if (a.size() != b.size() || a.empty()) return INFINITY;
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].q - b[i].q));
  return m;
}

void criterion4(Outcome& o) {
  auto heat = rows_of(run("solve", "heat_dirichlet.yaml").primary);
  const double eh = max_abs_diff(heat, rows_of(test::read_text(test::fixture_path("heat_dirichlet_fourier.csv"))));
  o.require(heat.size() == 105 && eh <= kFourierTol, "heat");

  auto hl = rows_of(run("solve", "half_line_erfc.yaml").primary);
  double ee = hl.size() == 10 ? 0.0 : INFINITY;
  for (const auto& r : hl) ee = std::max(ee, std::abs(r.q - erfc_solution(r.x, r.t)));
  o.require(ee <= kErfcTol, "erfc");

  auto wl = rows_of(run("solve", "whole_line_gaussian.yaml").primary);
  const double eg = max_abs_diff(wl, rows_of(test::read_text(test::fixture_path("whole_line_gaussian_kernel.csv"))));
  o.require(eg <= kGaussianTol, "gaussian");
  o.detail << " heat " << sci(eh) << "; erfc " << sci(ee) << "; gaussian " << sci(eg);
}

void criterion5(Outcome& o) {
  auto utm = rows_of(run("solve", "robin_bump.yaml").primary);
  auto cn = rows_of(test::read_text(test::fixture_path("robin_bump_cn.csv")));
  double scale = 0.0;
  for (const auto& r : cn) scale = std::max(scale, std::abs(r.q));
  const double rel = max_abs_diff(utm, cn) / scale;
  o.require(utm.size() == 105 && rel <= kRobinRelTol, "relative Linf");
  o.detail << " relative Linf " << sci(rel) << " over " << utm.size() << " points";
}

void criterion6(Outcome& o) {
  IdentityOptions opt;
  opt.seed = 7;
  size_t checks = 0;
  auto take = [&](const std::string& label, const IdentityReport& rep) {
    for (const IdentityCheck& c : rep.checks) {
      ++checks;
      o.require(c.passed, label + ": " + c.name + " " + sci(c.measured));
    }
  };
  for (const CaseConfig& cfg : boundary_case_configs()) take(cfg.label, run_identities(cfg.cache, cfg.bc, opt));
  DispersionCache hl(make_preset("gaussian_bump", {{"center", 1.0}}), Domain::half_line(0.0));
  take("half line", run_identities(hl, BoundaryConditions::half_line(1, 1), opt));
  DispersionCache wl(make_preset("gaussian_bump"), Domain::whole_line());
  take("whole line", run_identities(wl, BoundaryConditions::whole_line(), opt));
  o.require(checks > 0, "empty report");
  o.detail << " " << checks << " checks over 6 configurations";
}

void criterion7(Outcome& o) {
  DispersionCache bump(make_preset("gaussian_bump"), unit);
  ProblemData d;
  d.q0 = [](double x) { return cplx(std::exp(-20 * (x - 0.4) * (x - 0.4))); };

  SolutionField f = solve_q(bump, robin(), d, linspace(0, 1, 21), linspace(0.1, 0.3, 17));
  PdeResidual p = pde_residual(f, bump, d);
  o.require(p.ok(kPdeFactor), "PDE");
  o.detail << " PDE " << sci(p.residual) << " vs estimate " << sci(p.estimate) << ";";

  ProblemData g = d;
  g.f0 = [](double t) { return cplx(std::sin(t)); };
  BcResidual fb = bc_residual(solve_q(bump, robin(), g, linspace(0, 1, 81), {0.05, 0.2, 0.5}), robin(), g);
  DispersionCache hb(make_preset("gaussian_bump", {{"center", 1.0}}), Domain::half_line(0.0));
  ProblemData h;
  h.f0 = [](double t) { return cplx(std::sin(t)); };
  const auto hbc = BoundaryConditions::half_line(1, 1);
  BcResidual hr = bc_residual(solve_q(hb, hbc, h, linspace(0, 0.2, 9), linspace(0.1, 0.5, 5)), hbc, h);
  o.require(fb.max <= kBcTol && hr.max <= kBcTol, "BC");
  o.detail << " BC " << sci(fb.max) << " finite, " << sci(hr.max) << " half line;";

  ProblemData s;
  s.q0 = [](double x) { return cplx(std::sin(pi * x) + 0.5 * x * x); };
  s.f = [](double x, double t) { return cplx(t * x); };
  s.f0 = [](double t) { return cplx(std::sin(t)); };
  s.f1 = [](double t) { return cplx(t * t); };
  SolveOptions so;
  so.t_min = kIcTime;
  IcResidual ic = ic_residual(solve_q(bump, robin(), s, linspace(0, 1, 21), {kIcTime}, so), s);
  o.require(ic.max_error <= kIcTol, "IC");
  o.require(ic.qf_max <= kComponentTol && ic.qb_max <= kComponentTol, "q_f, q_B");
  o.detail << " IC " << sci(ic.max_error) << "; q_f " << sci(ic.qf_max) << "; q_B " << sci(ic.qb_max);
}

void criterion8(Outcome& o) {
  DispersionCache heat(make_preset("constant"), unit);
  BoundaryCase n = classify(neumann(), heat), p = classify(periodic(), heat), d = classify(dirichlet(), heat);
  o.require(n.id == CaseId::Case1, "Neumann");
  o.require(p.id == CaseId::Case2, "periodic");
  o.require(d.id == CaseId::Case3 && d.regular, "Dirichlet");
  int case4 = 0;
  for (const CaseConfig& cfg : boundary_case_configs()) {
    BoundaryCase c = classify(cfg.bc, cfg.cache);
    o.require(c.id == cfg.expected, cfg.label);
    if (c.id == CaseId::Case4) {
      ++case4;
      o.require(!c.regular, cfg.label + " regular");
    }
  }
  o.require(case4 > 0, "no Case4 configuration");
  o.detail << " Neumann " << to_string(n.id) << ", periodic " << to_string(p.id) << ", Dirichlet " << to_string(d.id)
           << (d.regular ? " regular" : " irregular") << "; " << case4 << " Case4 flagged irregular";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"CGL eigenvalue rows N=0,1,2", criterion1},
      {"exact eigenvalue lambda0 = 1", criterion2},
      {"classical Dirichlet spectrum and Delta", criterion3},
      {"constant coefficient solution accuracy", criterion4},
      {"variable coefficient Robin solve vs CN", criterion5},
      {"identity suite", criterion6},
      {"residual suite", criterion7},
      {"boundary case classification", criterion8},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), sec);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
