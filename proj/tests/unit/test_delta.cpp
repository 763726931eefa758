#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "utm/delta.hpp"
#include "utm/eigen.hpp"
#include "utm/identities.hpp"
#include "utm/presets.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);

BoundaryConditions dirichlet() { return BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}); }
BoundaryConditions periodic() { return BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1}); }
BoundaryConditions neumann() { return BoundaryConditions::finite({0, 1, 0, 0}, {0, 0, 0, 1}); }

CaseId case_of(const BoundaryConditions& bc) {
  DispersionCache cache(make_preset("constant"), unit);
  return classify(bc, cache).id;
}

}  // namespace

TEST_CASE("classical conditions classify as in the taxonomy") {
  DispersionCache cache(make_preset("constant"), unit);
  BoundaryCase d = classify(dirichlet(), cache);
  CHECK(d.id == CaseId::Case3);
  CHECK(d.regular);
  BoundaryCase p = classify(periodic(), cache);
  CHECK(p.id == CaseId::Case2);
  CHECK(std::abs(p.m_c0 + 2.0) < 1e-15);
  CHECK(classify(neumann(), cache).id == CaseId::Case1);
  CHECK(classify(BoundaryConditions::finite({1, 1, 0, 0}, {0, 0, 1, 0}), cache).id == CaseId::Case2);
  BoundaryCase irr = classify(BoundaryConditions::finite({1, 0, 0, 0}, {0, 1, 1, 0}), cache);
  CHECK(irr.id == CaseId::Case3);
  CHECK_FALSE(irr.regular);
  CHECK_THROWS_AS(classify(BoundaryConditions::half_line(1, 0), cache), Error);
}

TEST_CASE("the shipped case configurations classify as labelled") {
  for (const CaseConfig& c : boundary_case_configs()) {
    CAPTURE(c.label);
    BoundaryCase b = classify(c.bc, c.cache);
    CHECK(b.id == c.expected);
    if (b.id == CaseId::Case4) CHECK_FALSE(b.regular);
  }
}

TEST_CASE("classification ignores row scaling and order") {
  const std::array<std::array<cplx, 4>, 2> sets[] = {
      {{{1, 0, 0, 0}, {0, 0, 1, 0}}}, {{{1, 0, -1, 0}, {0, 1, 0, -1}}}, {{{0, 1, 0, 0}, {0, 0, 0, 1}}},
      {{{-1, 1, 0, 0}, {0, 0, 1, 1}}}, {{{2, 0, 1, 0}, {0, 3, 0, 1}}}};
  const cplx scales[] = {cplx(2.0), cplx(0.0, -3.0), cplx(1e-3, 1e-3), cplx(-7.5, 2.0)};
  for (const auto& r : sets) {
    CaseId base = case_of(BoundaryConditions::finite(r[0], r[1]));
    CHECK(case_of(BoundaryConditions::finite(r[1], r[0])) == base);
    for (cplx s : scales) {
      auto r0 = r[0];
      for (cplx& v : r0) v *= s;
      CHECK(case_of(BoundaryConditions::finite(r0, r[1])) == base);
      auto r1 = r[1];
      for (cplx& v : r1) v *= s;
      CHECK(case_of(BoundaryConditions::finite(r[0], r1)) == base);
    }
  }
}

TEST_CASE("rank deficient conditions are rejected") {
  try {
    BoundaryConditions::finite({1, 0, 0, 0}, {2, 0, 0, 0});
    FAIL("expected BoundaryRankError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BoundaryRank);
  }
  CHECK_THROWS_AS(BoundaryConditions::half_line(0, 0), Error);
}

TEST_CASE("constant coefficient closed forms") {
  std::mt19937_64 rng(11);
  SUBCASE("finite interval Dirichlet") {
    DispersionCache cache(make_preset("constant"), unit);
    ContourParams cp = contour_params(cache);
    for (int i = 0; i < 100; ++i) {
      cplx k = test::contour_point(rng, cp);
      cplx want = 2.0 * I * std::exp(I * k) * std::sin(k) / (k * k);
      CHECK(test::rel_err(delta_at(SpectralParam::general(k), dirichlet(), cache, 4), want) < 1e-12);
    }
  }
  SUBCASE("half line") {
    DispersionCache cache(make_preset("constant"), Domain::half_line(0.0));
    ContourParams cp = contour_params(cache);
    for (int i = 0; i < 100; ++i) {
      cplx k = test::contour_point(rng, cp);
      SpectralParam s = SpectralParam::general(k);
      CHECK(test::rel_err(delta_at(s, BoundaryConditions::half_line(1, 0), cache, 3), 2.0 * I / k) < 1e-12);
      CHECK(test::rel_err(delta_at(s, BoundaryConditions::half_line(0, 1), cache, 3), cplx(-2.0)) < 1e-12);
      CHECK(test::rel_err(delta_at(s, BoundaryConditions::half_line(1, 1), cache, 3), 2.0 * (I / k - 1.0)) < 1e-12);
    }
  }
  SUBCASE("whole line") {
    DispersionCache cache(make_preset("constant"), Domain::whole_line());
    ContourParams cp = contour_params(cache);
    for (int i = 0; i < 100; ++i) {
      cplx k = test::contour_point(rng, cp);
      CHECK(std::abs(delta_at(SpectralParam::general(k), BoundaryConditions::whole_line(), cache, 4) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("whole line value does not depend on the split point") {
  DispersionCache cache(make_preset("gaussian_bump", {{"center", 0.0}}), Domain::whole_line());
  SpectralParam s = SpectralParam::general(cplx(2.5, 3.0));
  AccumSeries tilde = accum_e_tilde_tail(s, {-0.3, 0.4}, 6, cache);
  AccumSeries tail = accum_e_tail(s, {-0.3, 0.4}, 6, cache);
  auto a = tilde.grid().find_point(-0.3), b = tilde.grid().find_point(0.4);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  REQUIRE(tail.grid().find_point(-0.3) == a);
  cplx d1 = delta_wl(tilde, tail, *a), d2 = delta_wl(tilde, tail, *b);
  CHECK(std::abs(d1 - d2) < 1e-9);
  CHECK(std::abs(d1 - 1.0) > 1e-6);
}

TEST_CASE("leading asymptotic terms") {
  DispersionCache cache(make_preset("constant"), unit);
  const cplx k(30.0, 40.0);
  BoundaryConditions n = neumann();
  CHECK(std::abs(b0_asymptotic(k, classify(n, cache), n, cache) + n.minor(2, 4)) < 1e-15);
  BoundaryConditions p = periodic();
  BoundaryCase pc = classify(p, cache);
  CHECK(std::abs(b0_asymptotic(k, pc, p, cache) - I * pc.m_c0 / k) < 1e-15);
  DispersionCache hl(make_preset("constant"), Domain::half_line(0.0));
  CHECK(std::abs(b0_asymptotic(k, {}, BoundaryConditions::half_line(1, 0), hl) - 2.0 * I / k) < 1e-15);
  CHECK(b0_asymptotic(k, {}, BoundaryConditions::whole_line(), hl) == cplx(1.0));
  BoundaryCase bad;
  CHECK_THROWS_AS(b0_asymptotic(k, bad, n, cache), Error);

  for (const CaseConfig& c : boundary_case_configs()) {
    CAPTURE(c.label);
    IdentityReport r = asymptotic_sandwich(c.cache, c.bc);
    CHECK(r.ok());
  }
}

TEST_CASE("truncation differences shrink with the order") {
  DispersionCache cache(make_preset("cgl"), unit);
  BoundaryConditions p = periodic();
  ContourParams cp = contour_params(cache);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    cplx k = test::contour_point(rng, cp);
    CAPTURE(k);
    SpectralParam s = SpectralParam::general(k);
    AccumSeries f = accum_cs_forward(s, cache.lo(), {}, 7, cache);
    AccumSeries b = accum_cs_backward(s, cache.hi(), {}, 7, cache);
    std::vector<cplx> d = delta_partial_sums(p, f, b, cache);
    REQUIRE(d.size() == 8);
    CHECK(test::rel_err(d[7], delta_fi(p, f, cache)) < 1e-12);
    double prev = INFINITY;
    for (int n = 0; n < 7; ++n) {
      double step = std::abs(d[n + 1] - d[n]);
      if (step < 1e-15 * std::abs(d[7])) continue;  // vanishing odd orders
      CHECK(step < prev);
      prev = step;
    }
  }
}

TEST_CASE("cgl double root at i") {
  // kappa = i sits at the origin of the reduced variable when gamma = 1.
  DispersionCache cache(make_preset("cgl"), unit);
  BoundaryConditions p = periodic();
  // The origin itself is a removable 0/0; probe the quadratic vanishing nearby.
  for (int N = 0; N <= 2; ++N) {
    CAPTURE(N);
    cplx h1 = characteristic(SpectralParam::reduced_form(cplx(1e-3, 1e-3)), p, cache, N);
    cplx h2 = characteristic(SpectralParam::reduced_form(cplx(2e-3, 2e-3)), p, cache, N);
    cplx far = characteristic(SpectralParam::reduced_form(0.5), p, cache, N);
    CHECK(std::abs(h1) < 1e-4 * std::abs(far));
    CHECK(std::abs(h2 / h1 - 4.0) < 1e-2);
  }
}
