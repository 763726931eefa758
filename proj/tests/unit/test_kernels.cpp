#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "test_support.hpp"
#include "utm/kernels.hpp"
#include "utm/presets.hpp"
#include "utm/timeint.hpp"

using namespace utm;

namespace {

const Domain unit = Domain::finite(0.0, 1.0);

cplx quad(const std::function<cplx(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](double s) { return f(s).real(); };
  auto im = [&](double s) { return f(s).imag(); };
  return {gauss_kronrod<double, 61>::integrate(re, a, b, 15, 1e-15),
          gauss_kronrod<double, 61>::integrate(im, a, b, 15, 1e-15)};
}

}  // namespace

TEST_CASE("whole line kernel is the free exponential") {
  DispersionCache cache(make_preset("constant"), Domain::whole_line());
  const cplx k(3.0, 2.0);
  const std::vector<double> pts{-1.3, -0.2, 0.4, 2.1};
  KernelContext ctx = KernelContext::build(cache, BoundaryConditions::whole_line(), SpectralParam::general(k), pts, 4);
  for (double x : pts)
    for (double y : pts) CHECK(test::rel_err(ctx.psi(x, y), std::exp(I * k * std::abs(x - y))) < 1e-12);
  CHECK(std::abs(ctx.boundary_kernel_point(0, ctx.point(0.4))) == 0.0);
}

TEST_CASE("half line Dirichlet kernel has image structure") {
  DispersionCache cache(make_preset("constant"), Domain::half_line(0.0));
  const cplx k(2.0, 3.0);
  const std::vector<double> pts{0.3, 0.8, 1.7};
  KernelContext ctx = KernelContext::build(cache, BoundaryConditions::half_line(1, 0), SpectralParam::general(k), pts, 3);
  CHECK(test::rel_err(ctx.psi(0.8, 0.3), 4.0 * std::exp(I * k * 0.8) * std::sin(k * 0.3) / k) < 1e-12);
  CHECK(test::rel_err(ctx.psi(1.7, 0.8), 4.0 * std::exp(I * k * 1.7) * std::sin(k * 0.8) / k) < 1e-12);
  for (double x : pts) CHECK(test::rel_err(boundary_kernel(ctx, 0, x), 4.0 * std::exp(I * k * x)) < 1e-12);
}

TEST_CASE("finite interval Dirichlet kernel factorises") {
  DispersionCache cache(make_preset("constant"), unit);
  const cplx k(4.0, 3.0);
  const std::vector<double> pts{0.1, 0.35, 0.6, 0.9};
  KernelContext ctx = KernelContext::build(cache, BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}),
                                           SpectralParam::general(k), pts, 2);
  // Psi(x, y) for y < x is a fixed multiple of sin(k y) sin(k (1 - x)).
  cplx ref = ctx.psi(0.35, 0.1) / (std::sin(k * 0.1) * std::sin(k * 0.65));
  CHECK(std::abs(ref) > 0.0);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      const double x = pts[i], y = pts[j];
      CHECK(test::rel_err(ctx.psi(x, y), ref * std::sin(k * y) * std::sin(k * (1.0 - x))) < 1e-12);
    }
  cplx b0 = boundary_kernel(ctx, 0, 0.35) / std::sin(k * 0.65);
  cplx b1 = boundary_kernel(ctx, 1, 0.35) / std::sin(k * 0.35);
  for (double x : pts) {
    CHECK(test::rel_err(boundary_kernel(ctx, 0, x), b0 * std::sin(k * (1.0 - x))) < 1e-12);
    CHECK(test::rel_err(boundary_kernel(ctx, 1, x), b1 * std::sin(k * x)) < 1e-12);
  }
}

TEST_CASE("kernel symmetry") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  SUBCASE("half line, variable coefficients") {
    DispersionCache cache(make_preset("gaussian_bump", {{"center", 1.0}}), Domain::half_line(0.0));
    std::vector<double> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(3.0 * u(rng));
    KernelContext ctx = KernelContext::build(cache, BoundaryConditions::half_line(1, 1),
                                             SpectralParam::general(cplx(3, 4)), pts, 6);
    for (double x : pts)
      for (double y : pts) CHECK(test::rel_err(ctx.psi(x, y), ctx.psi(y, x)) < 1e-10);
  }
  SUBCASE("finite interval, both directions of the criterion") {
    DispersionCache cache(make_preset("constant"), unit);
    std::vector<double> pts{u(rng), u(rng)};
    SpectralParam s = SpectralParam::general(cplx(3, 4));
    KernelContext sym = KernelContext::build(cache, BoundaryConditions::finite({1, 0, 1, 0}, {0, 1, 0, 1}), s, pts, 4);
    CHECK(test::rel_err(sym.psi(pts[0], pts[1]), sym.psi(pts[1], pts[0])) < 1e-10);
    KernelContext asym = KernelContext::build(cache, BoundaryConditions::finite({1, 0, 0, 0}, {0, 1, 1, 0}), s, pts, 4);
    CHECK(test::rel_err(asym.psi(pts[0], pts[1]), asym.psi(pts[1], pts[0])) > 1e-3);
  }
}

TEST_CASE("kernel is continuous across the diagonal") {
  DispersionCache cache(make_preset("cgl"), unit);
  const cplx k(5.0, 4.0);
  const double x = 0.42, h = 1e-7;
  KernelContext ctx = KernelContext::build(cache, BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1}),
                                           SpectralParam::general(k), {x - h, x, x + h}, 4);
  const cplx c = ctx.psi(x, x);
  CHECK(std::abs(ctx.psi(x, x - h) - c) < 1e-9 * std::abs(c) + 4 * h * std::abs(k) * std::abs(c));
  CHECK(std::abs(ctx.psi(x, x + h) - c) < 1e-9 * std::abs(c) + 4 * h * std::abs(k) * std::abs(c));
}

TEST_CASE("kernel over Delta stays bounded along the contour") {
  DispersionCache cache(make_preset("gaussian_bump"), unit);
  BoundaryConditions bc = BoundaryConditions::finite({-1, 1, 0, 0}, {0, 0, 1, 1});
  ContourParams cp = contour_params(cache);
  for (double ang : {cp.theta0, pi - cp.theta0}) {
    auto ratio = [&](double rad) {
      KernelContext ctx = KernelContext::build(cache, bc, SpectralParam::general(std::polar(rad, ang)), {0.3, 0.7}, 4);
      return std::abs(ctx.psi(0.7, 0.3) / ctx.delta());
    };
    CHECK(ratio(4 * cp.r) <= 10.0 * ratio(2 * cp.r));
  }
}

TEST_CASE("initial data transform") {
  SUBCASE("zero data") {
    DispersionCache cache(make_preset("constant"), unit);
    KernelContext ctx = KernelContext::build(cache, BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0}),
                                             SpectralParam::general(cplx(3, 3)), {0.5}, 2);
    CHECK(phi0(ctx, 0.5, ProblemData{}) == cplx(0.0));
  }
  SUBCASE("box on the whole line") {
    DispersionCache cache(make_preset("constant"), Domain::whole_line());
    const cplx k(2.0, 1.5);
    ProblemData d;
    d.q0 = [](double y) { return cplx(std::abs(y) <= 1.0 ? 1.0 : 0.0); };
    d.breaks = {-1.0, 1.0};
    KernelContext ctx = KernelContext::build(cache, BoundaryConditions::whole_line(), SpectralParam::general(k),
                                             {-1.0, 1.0, 0.3, 2.5}, 2);
    auto exact = [&](double x) {
      if (x >= 1.0) return (std::exp(I * k * (x + 1.0)) - std::exp(I * k * (x - 1.0))) / (I * k);
      return (std::exp(I * k * (x + 1.0)) - 1.0) / (I * k) + (std::exp(I * k * (1.0 - x)) - 1.0) / (I * k);
    };
    CHECK(test::rel_err(phi0(ctx, 0.3, d), exact(0.3)) < 1e-10);
    CHECK(test::rel_err(phi0(ctx, 2.5, d), exact(2.5)) < 1e-10);
  }
  SUBCASE("cgl profile against a refined quadrature") {
    DispersionCache cache(make_preset("cgl"), unit);
    BoundaryConditions bc = BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1});
    const cplx k(4.0, 6.0);
    KernelContext ctx = KernelContext::build(cache, bc, SpectralParam::general(k), {0.37}, 4);
    ProblemData d;
    d.q0 = [](double y) { return cplx(std::sin(2 * pi * y)); };
    std::vector<double> ys;
    for (int i = 1; i < 40; ++i) ys.push_back(i / 40.0);
    ys.push_back(0.37);
    KernelContext fine = KernelContext::build(cache, bc, SpectralParam::general(k), ys, 4);
    CHECK(test::rel_err(phi0(ctx, 0.37, d), phi0(fine, 0.37, d)) < 1e-8);
  }
}

TEST_CASE("data transforms are linear") {
  DispersionCache cache(make_preset("tanh_step"), unit);
  BoundaryConditions bc = BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 0, 1});
  KernelContext ctx = KernelContext::build(cache, bc, SpectralParam::general(cplx(3, 5)), {0.6}, 4);
  ProblemData a, b, ab;
  a.q0 = [](double y) { return cplx(y * (1 - y)); };
  b.q0 = [](double y) { return cplx(std::cos(3 * y), y); };
  ab.q0 = [&](double y) { return a.q0(y) + 2.0 * b.q0(y); };
  cplx sa = phi0(ctx, 0.6, a), sb = phi0(ctx, 0.6, b), sab = phi0(ctx, 0.6, ab);
  CHECK(std::abs(sab - sa - 2.0 * sb) < 1e-12 * (std::abs(sa) + std::abs(sb)));
  a.f = [](double y, double t) { return cplx(std::exp(-t) * y); };
  b.f = [](double y, double t) { return cplx(std::sin(t), y * y); };
  ab.f = [&](double y, double t) { return a.f(y, t) + 2.0 * b.f(y, t); };
  cplx fa = phi_f_deformed(ctx, 0.6, 0.3, a), fb = phi_f_deformed(ctx, 0.6, 0.3, b), fab = phi_f_deformed(ctx, 0.6, 0.3, ab);
  CHECK(std::abs(fab - fa - 2.0 * fb) < 1e-12 * (std::abs(fa) + std::abs(fb)));
}

TEST_CASE("forcing transform of time independent data") {
  DispersionCache cache(make_preset("constant"), Domain::whole_line());
  const cplx k(2.0, 2.5);
  const double t = 0.4;
  ProblemData q, f;
  q.q0 = [](double y) { return cplx(std::exp(-y * y)); };
  f.f = [](double y, double) { return cplx(std::exp(-y * y)); };
  KernelContext ctx = KernelContext::build(cache, BoundaryConditions::whole_line(), SpectralParam::general(k), {0.2}, 2);
  CHECK(phi_f_deformed(ctx, 0.2, t, ProblemData{}) == cplx(0.0));
  cplx want = -std::exp(-k * k * t) / (k * k) * phi0(ctx, 0.2, q);
  CHECK(test::rel_err(phi_f_deformed(ctx, 0.2, t, f), want) < 1e-10);
}

TEST_CASE("forcing transform against the undeformed definition") {
  // f = exp(-t) sin(pi x): frak f e^{-k^2 t} = -(1/k^2) int_0^t e^{-k^2 (t-s)} f_s ds - f(.,0) e^{-k^2 t}/k^2,
  // and the undeformed transform is int_0^t e^{-k^2 (t-s)} f ds = that + f(.,t)/k^2.
  DispersionCache cache(make_preset("constant"), unit);
  BoundaryConditions bc = BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0});
  const cplx k(3.0, 1.0);
  const double t = 0.5;
  KernelContext ctx = KernelContext::build(cache, bc, SpectralParam::general(k), {0.3}, 2);
  ProblemData f, ft, q;
  f.f = [](double y, double s) { return cplx(std::exp(-s) * std::sin(pi * y)); };
  q.q0 = [](double y) { return cplx(std::sin(pi * y)); };
  cplx undeformed = quad([&](double s) { return std::exp(-k * k * (t - s)) * std::exp(-s); }, 0, t) * phi0(ctx, 0.3, q);
  cplx boundary = std::exp(-t) / (k * k) * phi0(ctx, 0.3, q);
  CHECK(test::rel_err(phi_f_deformed(ctx, 0.3, t, f) + boundary, undeformed) < 1e-9);
}

TEST_CASE("boundary data transforms") {
  const cplx k = 3.0 * std::exp(I * 3.0 * pi / 16.0), k2 = k * k;
  const double t = 0.5;
  SUBCASE("constant data") {
    auto c = [](double) { return cplx(1.5, -0.5); };
    CHECK(test::rel_err(Fm(k2, t, c), c(0) * (std::exp(k2 * t) - 1.0) / k2) < 1e-12);
    CHECK(test::rel_err(Fm_frak(k2, t, c), -c(0) / k2) < 1e-12);
    CHECK(test::rel_err(fm_frak_decayed(k2, t, c, 2), -c(0) * std::exp(-k2 * t) / k2) < 1e-12);
  }
  SUBCASE("linear data") {
    auto f = [](double s) { return cplx(s); };
    CHECK(test::rel_err(fm_frak_decayed(k2, t, f), -(1.0 - std::exp(-k2 * t)) / (k2 * k2)) < 1e-12);
  }
  SUBCASE("sin against direct quadrature") {
    auto f = [](double s) { return cplx(std::sin(s)); };
    cplx direct = quad([&](double s) { return std::exp(k2 * s) * f(s); }, 0, t);
    CHECK(test::rel_err(Fm(k2, t, f), direct) < 1e-10);
    CHECK(test::rel_err(Fm_frak(k2, t, f), direct - std::exp(k2 * t) * f(t) / k2) < 1e-10);
    CHECK(test::rel_err(fm_frak_decayed(k2, t, f), (direct - std::exp(k2 * t) * f(t) / k2) * std::exp(-k2 * t)) < 1e-10);
  }
}
