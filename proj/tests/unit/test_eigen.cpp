#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "test_support.hpp"
#include "utm/eigen.hpp"
#include "utm/presets.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);

BoundaryConditions dirichlet() { return BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}); }
BoundaryConditions periodic() { return BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1}); }

std::vector<EigenPair> dirichlet_pairs(const DispersionCache& cache) {
  SearchRegion region{cplx(0.5, -0.5), cplx(16.5, 0.5)};
  auto pairs = find_eigenvalues(dirichlet(), cache, region, 2);
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.kappa.real() < b.kappa.real(); });
  return pairs;
}

}  // namespace

TEST_CASE("Dirichlet spectrum of the heat operator") {
  DispersionCache cache(make_preset("constant"), unit);
  auto pairs = dirichlet_pairs(cache);
  REQUIRE(pairs.size() == 5);
  for (int m = 1; m <= 5; ++m) {
    const EigenPair& p = pairs[m - 1];
    CHECK(std::abs(p.kappa - m * pi) < 1e-10);
    CHECK(std::abs(p.lambda + p.kappa * p.kappa) < 1e-12 * std::abs(p.lambda));
    CHECK(p.kappa.imag() >= -1e-12);
    CHECK(p.residual < 1e-4);
  }
}

TEST_CASE("Dirichlet eigenfunction and residual sensitivity") {
  DispersionCache cache(make_preset("constant"), unit);
  EigenPair p = dirichlet_pairs(cache).front();
  CHECK(test::rel_err(eigenfunction(p, cache, 0.25) / eigenfunction(p, cache, 0.5), cplx(std::sin(pi / 4))) < 1e-9);
  CHECK(std::abs(eigenfunction(p, cache, 0.0)) < 1e-12 * std::abs(eigenfunction(p, cache, 0.5)));
  const double base = eigen_residual(p, cache, dirichlet());
  EigenPair off = p;
  off.kappa += 1e-3;
  off.kk += 1e-3;
  off.lambda = -off.kappa * off.kappa;
  eigen_coefficients(off, dirichlet(), cache);
  CHECK(eigen_residual(off, cache, dirichlet()) >= 10 * base);
}

TEST_CASE("zeroth order guesses") {
  // gamma = 1 puts the zeroth order roots at sqrt(4 m^2 pi^2 - 1).
  DispersionCache cache(make_preset("constant", {{"gamma", 1.0}}), unit);
  auto g = initial_guesses(cache, 3);
  REQUIRE(g.size() >= 3);
  auto has = [&](cplx v) { return std::any_of(g.begin(), g.end(), [&](cplx z) { return std::abs(z - v) < 1e-12; }); };
  CHECK(has(std::sqrt(4 * pi * pi - 1)));
  CHECK(has(std::sqrt(16 * pi * pi - 1)));
  CHECK(has(I));
  DispersionCache heat(make_preset("constant"), unit);
  CHECK(std::abs(initial_guesses(heat, 1).back() - 2 * pi) < 1e-12);
}

TEST_CASE("winding numbers count enclosed zeros") {
  auto f = [](cplx z) { return (z - 0.5) * (z + cplx(0, 0.2)) * (z - cplx(3, 3)); };
  CHECK(winding_number(f, cplx(-1, -1), cplx(1, 1)) == 2);
  CHECK(winding_number(f, cplx(0, -0.1), cplx(1, 1)) == 1);
  CHECK(winding_number(f, cplx(2, 2), cplx(4, 4)) == 1);
  CHECK(winding_number(f, cplx(-3, 1), cplx(-2, 2)) == 0);
  CHECK_THROWS_AS(winding_number(f, cplx(0.5, -1), cplx(1, 1)), Error);
}

TEST_CASE("cgl spectrum at order 2") {
  DispersionCache cache(make_preset("cgl"), unit);
  BoundaryConditions bc = periodic();
  auto pairs = find_eigenvalues(bc, cache, default_region(cache, 5), 2);
  REQUIRE(pairs.size() >= 3);
  const EigenPair& z = pairs.front();
  CHECK(std::abs(z.lambda - 1.0) < 1e-8);
  CHECK(z.multiplicity == 2);

  const cplx reference[] = {{-41.585, 3.3356}, {-41.689, 7.7172}, {-170.70, 19.916}, {-170.63, 23.466}};
  std::vector<cplx> lambdas;
  for (size_t i = 1; i < pairs.size(); ++i) lambdas.push_back(pairs[i].lambda);
  for (cplx want : reference) {
    CAPTURE(want);
    auto it = std::min_element(lambdas.begin(), lambdas.end(), [&](cplx a, cplx b) { return std::abs(a - want) < std::abs(b - want); });
    REQUIRE(it != lambdas.end());
    CHECK(std::abs(it->real() - want.real()) < 0.05);
    CHECK(std::abs(it->imag() - want.imag()) < 0.05);
  }

  // Matched one to one with the frozen matrix oracle values.
  auto j = nlohmann::json::parse(test::read_text(test::fixture_path("cgl_matrix_eigs.json")));
  std::vector<cplx> oracle;
  for (const auto& e : j) oracle.emplace_back(e["lambda_re"].get<double>(), e["lambda_im"].get<double>());
  for (const EigenPair& p : pairs) {
    auto it = std::min_element(oracle.begin(), oracle.end(), [&](cplx a, cplx b) { return std::abs(a - p.lambda) < std::abs(b - p.lambda); });
    CHECK(std::abs(*it - p.lambda) < 0.1);
  }

  // Residuals carry the order 2 truncation error.
  for (const EigenPair& p : pairs) CHECK(p.residual < 1e-3);
  for (const EigenPair& p : pairs) {
    if (std::abs(p.kk) < 1e-6) continue;
    cplx plus = characteristic(SpectralParam::reduced_form(p.kk), bc, cache, 2);
    cplx minus = characteristic(SpectralParam::reduced_form(-p.kk), bc, cache, 2);
    CHECK(std::abs(minus) <= 10 * std::abs(plus) + 1e-10);
  }
}

TEST_CASE("cgl residual at a converged order") {
  DispersionCache cache(make_preset("cgl"), unit);
  SearchRegion region{cplx(6.3, -0.45), cplx(6.75, -0.1)};
  auto pairs = find_eigenvalues(periodic(), cache, region, 4);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].residual < 1e-6);
  CHECK(std::abs(pairs[0].lambda - cplx(-41.585, 3.3356)) < 0.05);

  // The cosine part alone is the constant eigenfunction of lambda = 1.
  auto zero = find_eigenvalues(periodic(), cache, SearchRegion{cplx(-0.5, -0.5), cplx(0.5, 0.5)}, 3);
  REQUIRE(zero.size() == 1);
  EigenPair zc = zero[0];
  CHECK(std::abs(zc.lambda - 1.0) < 1e-8);
  zc.C = 1.0;
  zc.S = 0.0;
  cplx x0 = eigenfunction(zc, cache, 0.1);
  for (double x : {0.3, 0.55, 0.9}) CHECK(std::abs(eigenfunction(zc, cache, x) - x0) < 1e-8 * std::abs(x0));
}

TEST_CASE("eigen errors") {
  DispersionCache hl(make_preset("constant"), Domain::half_line(0.0));
  SearchRegion r{cplx(1, -1), cplx(4, 1)};
  CHECK_THROWS_AS(find_eigenvalues(BoundaryConditions::half_line(1, 0), hl, r, 1), Error);
  DispersionCache cache(make_preset("constant"), unit);
  CHECK_THROWS_AS(find_eigenvalues(dirichlet(), cache, SearchRegion{cplx(4, 1), cplx(1, -1)}, 1), Error);
  try {
    find_eigenvalues(BoundaryConditions::finite({1, 0, 0, 0}, {0, 1, 0, 0}), cache, r, 1);
    FAIL("expected CaseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Case);
  }
}
