#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "utm/accum.hpp"
#include "utm/presets.hpp"
#include "utm/quadrature.hpp"

using namespace utm;

namespace {

ScalarFn cst(cplx c) {
  return [c](double) { return c; };
}

CoefficientProfile profile(ScalarFn a, ScalarFn b, ScalarFn g) {
  CoefficientProfile p;
  p.alpha = std::move(a);
  p.beta = std::move(b);
  p.gamma = std::move(g);
  return p;
}

double item(const ValidationReport& r, const std::string& name) {
  const ValidationItem* it = r.find(name);
  REQUIRE(it != nullptr);
  return it->measured;
}

}  // namespace

TEST_CASE("constant coefficients pass every assumption") {
  DispersionCache cache(make_preset("constant"), Domain::finite(0, 1));
  ValidationReport rep = validate_assumptions(cache);
  CHECK(rep.ok());
  CHECK(item(rep, "dissipativity") == doctest::Approx(0.0));
  CHECK(item(rep, "lower_bound") == doctest::Approx(1.0).epsilon(0.11));
  CHECK(cache.bounds().Theta_measured == 0.0);
}

TEST_CASE("cgl profile is dissipative") {
  DispersionCache cache(make_preset("cgl"), Domain::finite(0, 1));
  ValidationReport rep = validate_assumptions(cache);
  CHECK(rep.ok());
  CHECK(item(rep, "dissipativity") > 0.1);
  CHECK(item(rep, "dissipativity") < 0.5 * pi);
}

TEST_CASE("alpha rotated by i sits on the dissipativity boundary") {
  DispersionCache cache(profile(cst(I), cst(1.0), cst(0.0)), Domain::finite(0, 1));
  ValidationReport rep = validate_assumptions(cache);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.find("dissipativity")->passed);
  CHECK(item(rep, "dissipativity") == doctest::Approx(0.5 * pi));
  CHECK_THROWS_AS(contour_params(cache), Error);
}

TEST_CASE("dispersion at simple points") {
  DispersionCache heat(make_preset("constant"), Domain::finite(0, 1));
  Dispersion d = heat.dispersion(cplx(3.0, 1.0), 0.3);
  CHECK(std::abs(d.mu - 1.0) < 1e-15);
  CHECK(std::abs(d.g - 1.0) < 1e-15);
  CHECK(std::abs(d.n - 1.0) < 1e-15);
  CHECK(std::abs(d.beta_n - 1.0) < 1e-15);

  DispersionCache g1(make_preset("constant", {{"gamma", 1.0}}), Domain::finite(0, 1));
  CHECK(std::abs(g1.dispersion(2.0, 0.5).g - std::sqrt(1.25)) < 1e-15);
  CHECK_THROWS_AS(g1.dispersion(0.5, 0.5), Error);
  try {
    g1.dispersion(cplx(0.0, 0.9), 0.5);
    FAIL("expected ContourRadiusError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContourRadius);
  }

  DispersionCache cgl(make_preset("cgl"), Domain::finite(0, 1));
  CHECK(std::abs(cgl.mu(0.0) - 1.0) < 1e-15);
}

TEST_CASE("mfrak and ufrak closed forms") {
  DispersionCache c(make_preset("constant", {{"alpha", 4.0}}), Domain::finite(1, 3));
  CHECK(std::abs(c.mfrak(2.5) - 0.75) < 1e-13);
  CHECK(std::abs(c.ufrak(2.0)) < 1e-12);

  CoefficientProfile p = profile([](double x) { return cplx(std::exp(x)); }, cst(1.0), cst(0.0));
  p.alpha_prime = [](double x) { return cplx(std::exp(x)); };
  DispersionCache e(p, Domain::finite(0, 1));
  for (double x : {0.1, 0.5, 0.9}) CHECK(std::abs(e.ufrak(x) + std::exp(0.5 * x)) < 1e-10);
}

TEST_CASE("mfrak is additive and differentiates to mu") {
  DispersionCache cache(make_preset("cgl"), Domain::finite(0, 1));
  const GaussRule& g = gauss_legendre(16);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    cplx q = 0.0;
    const int panels = 32;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
      for (size_t j = 0; j < g.x.size(); ++j) q += 0.5 * (hi - lo) * g.w[j] * cache.mu(0.5 * (lo + hi) + 0.5 * (hi - lo) * g.x[j]);
    }
    CHECK(std::abs(cache.mfrak(b) - cache.mfrak(a) - q) < 1e-10);
    const double x = 0.05 + 0.9 * u(rng), h = 1e-4;
    CHECK(std::abs((cache.mfrak(x + h) - cache.mfrak(x - h)) / (2 * h) - cache.mu(x)) < 1e-7);
  }
}

TEST_CASE("continuous arguments go past the principal branch") {
  // alpha beta = 1, but theta_alpha reaches 3.6 > pi on (0, 3).
  CoefficientProfile p = profile([](double x) { return std::exp(I * 1.2 * x); },
                                 [](double x) { return std::exp(-I * 1.2 * x); }, cst(0.0));
  DispersionCache cache(p, Domain::finite(0, 3));
  CHECK(validate_assumptions(cache).ok());
  for (double x : {0.5, 1.5, 2.9}) {
    CHECK(cache.theta_alpha(x) == doctest::Approx(1.2 * x).epsilon(1e-9));
    CHECK(cache.theta_beta(x) == doctest::Approx(-1.2 * x).epsilon(1e-9));
  }
}

TEST_CASE("contour angles and radius") {
  ContourAngles a0 = contour_angles(0.0);
  CHECK(a0.theta1 == doctest::Approx(pi / 8));
  CHECK(a0.theta0 == doctest::Approx(3 * pi / 16));
  ContourAngles a1 = contour_angles(pi / 4);
  CHECK(a1.theta1 == doctest::Approx(3 * pi / 16));
  CHECK(a1.theta0 == doctest::Approx(7 * pi / 32));
  DispersionCache heat(make_preset("constant"), Domain::finite(0, 1));
  CHECK(contour_params(heat, 2.0).r == doctest::Approx(2.0));
  CHECK_THROWS_AS(contour_params(heat, 1.5), Error);
}

TEST_CASE("branch consistency and the n bounds on the contour") {
  for (const char* name : {"cgl", "gaussian_bump", "tanh_step"}) {
    CAPTURE(name);
    DispersionCache cache(make_preset(name), Domain::finite(0, 1));
    ContourParams cp = contour_params(cache);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      cplx k = test::contour_point(rng, cp);
      double x = u(rng);
      CoefficientPoint c = cache.at(x);
      SpectralParam s = SpectralParam::general(k);
      cplx sb = sqrt_beta_n(c, s);
      Dispersion d = cache.dispersion(k, x);
      CHECK(std::abs(sb * sb - d.beta_n) <= 1e-12 * std::abs(d.beta_n));
      CHECK(std::abs(d.n) >= cp.m_n * (1 - 1e-12));
      CHECK(std::abs(d.n) <= cp.M_n * (1 + 1e-12));
      CHECK((I * k * d.n).real() <= -cp.m_in * std::abs(k) + 1e-12);
    }
  }
}

TEST_CASE("default derivatives use Richardson central differences") {
  ScalarFn f = [](double x) { return cplx(std::sin(x), std::cos(2 * x)); };
  cplx d = richardson_derivative(f, 0.3);
  CHECK(std::abs(d - cplx(std::cos(0.3), -2 * std::sin(0.6))) < 1e-9);
}

TEST_CASE("bad profiles and domains are rejected") {
  CHECK_THROWS_AS(Domain::finite(1, 0).validate(), Error);
  CoefficientProfile nan = profile([](double x) { return x > 0.5 ? cplx(NAN) : cplx(1.0); }, cst(1.0), cst(0.0));
  try {
    DispersionCache c(nan, Domain::finite(0, 1));
    FAIL("expected EvaluationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Evaluation);
  }
  CoefficientProfile missing;
  CHECK_THROWS_AS(DispersionCache(missing, Domain::finite(0, 1)), Error);
}
