#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "utm/contour.hpp"
#include "utm/oracle.hpp"
#include "utm/presets.hpp"
#include "utm/solver.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);

BoundaryConditions dirichlet() { return BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}); }
BoundaryConditions robin() { return BoundaryConditions::finite({-1, 1, 0, 0}, {0, 0, 1, 1}); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

double max_diff(const SolutionField& a, const SolutionField& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.q.size(); ++i) m = std::max(m, std::abs(a.q[i] - b.q[i]));
  return m;
}

}  // namespace

TEST_CASE("contour geometry") {
  DispersionCache cache(make_preset("constant"), unit);
  ContourSpec c = build_contour(cache, 0.1);
  CHECK(c.theta0 == doctest::Approx(3 * pi / 16));
  CHECK(c.count(Segment::Arc) == 64);
  double rmin = INFINITY;
  for (cplx k : c.nodes) rmin = std::min(rmin, std::abs(k));
  CHECK(rmin >= c.r * (1 - 1e-12));
  CHECK(rmin <= c.r * 1.05);
  // Frozen regression value of the decay equation root.
  CHECK(solve_kmax(3 * pi / 16, 0.1, 1e-12, 2.0) == doctest::Approx(29.996369682682072).epsilon(1e-9));

  // e^{-k^2 t + i k x} is entire and decays in both sectors: the contour
  // integral equals the real-line Gaussian integral.
  for (double refine : {1.0, 0.5}) {
    ContourOptions o;
    o.refine = refine;
    ContourSpec s = build_contour(cache, 0.1, 1e-12, o);
    for (double x : {0.0, 0.3, 0.9}) {
      cplx sum = 0.0;
      for (size_t i = 0; i < s.size(); ++i) sum += s.weights[i] * std::exp(-s.nodes[i] * s.nodes[i] * 0.1 + I * s.nodes[i] * x);
      CHECK(std::abs(sum - std::sqrt(pi / 0.1) * std::exp(-x * x / 0.4)) < 1e-12);
    }
  }
}

TEST_CASE("contour errors") {
  DispersionCache cache(make_preset("constant"), unit);
  ContourOptions small;
  small.max_nodes = 10;
  CHECK(kind_of([&] { build_contour(cache, 0.1, 1e-12, small); }) == ErrorKind::Budget);
  ContourOptions low;
  low.radius = 1.0;
  CHECK(kind_of([&] { build_contour(cache, 0.1, 1e-12, low); }) == ErrorKind::ContourRadius);
  ContourOptions steep;
  steep.theta0 = pi / 4;
  CHECK(kind_of([&] { build_contour(cache, 0.1, 1e-12, steep); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { build_contour(cache, 0.0); }) == ErrorKind::Argument);
}

TEST_CASE("zero data gives the zero field") {
  DispersionCache cache(make_preset("gaussian_bump"), unit);
  SolutionField f = solve_q(cache, robin(), ProblemData{}, linspace(0, 1, 5), {0.1, 0.3});
  for (cplx q : f.q) CHECK(std::abs(q) < 1e-13);
}

TEST_CASE("heat equation point values") {
  DispersionCache cache(make_preset("constant"), unit);
  ProblemData d;
  d.q0 = [](double x) { return cplx(std::sin(pi * x)); };
  SolutionField f = solve_q(cache, dirichlet(), d, {0.5}, {0.1});
  CHECK(std::abs(f.at(0, 0) - std::exp(-pi * pi / 10)) < 1e-6);
  CHECK(f.diag.boundary_case == "Case3");
  CHECK(f.diag.regular);

  DispersionCache hl(make_preset("constant"), Domain::half_line(0.0));
  ProblemData e;
  e.f0 = [](double) { return cplx(1.0); };
  SolutionField g = solve_q(hl, BoundaryConditions::half_line(1, 0), e, {1.0}, {0.25});
  CHECK(std::abs(g.at(0, 0) - erfc_solution(1.0, 0.25)) < 1e-5);
}

TEST_CASE("solution does not depend on the contour") {
  DispersionCache cache(make_preset("gaussian_bump"), unit);
  ProblemData d;
  d.q0 = [](double x) { return cplx(std::exp(-20 * (x - 0.4) * (x - 0.4))); };
  const auto x = linspace(0.1, 0.9, 5);
  const std::vector<double> t{0.05, 0.2};
  SolutionField base = solve_q(cache, robin(), d, x, t);
  SolveOptions a;
  a.theta0 = contour_angles(cache.bounds().Theta_measured).theta1 + 0.01;
  CHECK(max_diff(base, solve_q(cache, robin(), d, x, t, a)) < 1e-9);
  SolveOptions b;
  b.contour_refine = 0.5;
  CHECK(max_diff(base, solve_q(cache, robin(), d, x, t, b)) < 1e-10);
}

TEST_CASE("superposition") {
  DispersionCache cache(make_preset("tanh_step"), unit);
  ProblemData a, b, ab;
  a.q0 = [](double x) { return cplx(x * (1 - x)); };
  a.f1 = [](double t) { return cplx(std::sin(3 * t)); };
  b.q0 = [](double x) { return cplx(0.0, std::cos(pi * x)); };
  b.f = [](double x, double t) { return cplx(std::exp(-t) * x); };
  b.f0 = [](double t) { return cplx(t * t); };
  ab.q0 = [&](double x) { return a.q0(x) + 2.0 * b.q0(x); };
  ab.f = [&](double x, double t) { return 2.0 * b.f(x, t); };
  ab.f0 = [&](double t) { return 2.0 * b.f0(t); };
  ab.f1 = a.f1;
  const auto x = linspace(0.1, 0.9, 3);
  const std::vector<double> t{0.1, 0.4};
  SolveOptions o;
  o.N = 2;
  SolutionField fa = solve_q(cache, robin(), a, x, t, o), fb = solve_q(cache, robin(), b, x, t, o);
  SolutionField fab = solve_q(cache, robin(), ab, x, t, o);
  for (size_t i = 0; i < fa.q.size(); ++i) CHECK(std::abs(fab.q[i] - fa.q[i] - 2.0 * fb.q[i]) < 1e-11);
}

TEST_CASE("solver errors") {
  DispersionCache cache(make_preset("constant"), unit);
  ProblemData d;
  d.q0 = [](double x) { return cplx(x); };
  CHECK(kind_of([&] { solve_q(cache, dirichlet(), d, {0.5}, {1e-4}); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { solve_q(cache, dirichlet(), d, {1.5}, {0.1}); }) == ErrorKind::Argument);
  CHECK(kind_of([&] { solve_q(cache, BoundaryConditions::half_line(1, 0), d, {0.5}, {0.1}); }) == ErrorKind::Argument);
  auto unsupported = BoundaryConditions::finite({1, 0, 0, 0}, {0, 1, 0, 0});
  CHECK(kind_of([&] { solve_q(cache, unsupported, d, {0.5}, {0.1}); }) == ErrorKind::Case);
  auto irregular = BoundaryConditions::finite({1, 0, 0, 0}, {0, 1, 1, 0});
  CHECK(kind_of([&] { solve_q(cache, irregular, d, {0.02}, {0.1}); }) == ErrorKind::Argument);
  SolutionField ok = solve_q(cache, irregular, d, {0.5}, {0.1});
  CHECK_FALSE(ok.diag.regular);
}

TEST_CASE("empty grids") {
  DispersionCache cache(make_preset("constant"), unit);
  CHECK(linspace(0, 1, 0).empty());
  CHECK(linspace(0, 1, 1) == std::vector<double>{0.0});
  SolutionField f = solve_q(cache, dirichlet(), ProblemData{}, {}, {0.1});
  CHECK(f.q.empty());
}
