#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "utm/delta.hpp"
#include "utm/identities.hpp"
#include "utm/presets.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);

void require_ok(const IdentityReport& rep) {
  REQUIRE(rep.checks.size() >= 3);
  for (const IdentityCheck& c : rep.checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CAPTURE(c.measured);
    CAPTURE(c.threshold);
    CHECK(c.passed);
  }
}

// Robin pair with random real weights at each end.
BoundaryConditions random_robin(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  return BoundaryConditions::finite({-u(rng), 1, 0, 0}, {0, 0, u(rng), 1});
}

}  // namespace

TEST_CASE("identity suite holds for every preset") {
  std::mt19937_64 rng(11);
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    DispersionCache cache(make_preset(name), unit);
    IdentityOptions o;
    o.seed = rng();
    o.samples = 4;
    require_ok(run_identities(cache, random_robin(rng), o));
  }
}

TEST_CASE("identity suite on the half line and the whole line") {
  IdentityOptions o;
  o.seed = 5;
  o.samples = 4;
  DispersionCache hl(make_preset("gaussian_bump", {{"center", 1.0}}), Domain::half_line(0.0));
  require_ok(run_identities(hl, BoundaryConditions::half_line(1, 1), o));
  DispersionCache wl(make_preset("gaussian_bump"), Domain::whole_line());
  require_ok(run_identities(wl, BoundaryConditions::whole_line(), o));
}

TEST_CASE("factorial bounds are strict for several seeds") {
  DispersionCache cache(make_preset("tanh_step"), unit);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    IdentityOptions o;
    o.seed = seed;
    IdentityReport rep = factorial_bounds(cache, o);
    REQUIRE_FALSE(rep.checks.empty());
    for (const IdentityCheck& c : rep.checks) CHECK(c.measured < c.threshold);
  }
}

TEST_CASE("Delta is analytic: circle means equal centre values") {
  std::mt19937_64 rng(23);
  for (const auto& cfg : boundary_case_configs()) {
    if (cfg.label.find("cgl") != std::string::npos) continue;  // nonzero gamma: branch points of the reduced variable
    CAPTURE(cfg.label);
    const ContourParams cp = contour_params(cfg.cache);
    for (int trial = 0; trial < 3; ++trial) {
      const cplx k0 = test::contour_point(rng, cp);
      const double rho = 0.05 * std::abs(k0);
      const int n = 64;
      cplx mean = 0.0;
      for (int j = 0; j < n; ++j)
        mean += delta_at(SpectralParam::general(k0 + std::polar(rho, 2 * pi * j / n)), cfg.bc, cfg.cache, 6);
      mean /= double(n);
      const cplx centre = delta_at(SpectralParam::general(k0), cfg.bc, cfg.cache, 6);
      CHECK(test::rel_err(mean, centre) < 1e-8);
    }
  }
}
