#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"
#include "utm/oracle.hpp"
#include "utm/quadrature.hpp"

namespace utm {
namespace {

struct Constants {
  cplx ab, gamma;
};

Constants constants_of(const DispersionCache& cache) {
  const auto& p = cache.profile();
  double a = cache.lo(), b = cache.hi();
  cplx al = p.alpha(a), be = p.beta(a), ga = p.gamma(a);
  for (int i = 1; i <= 16; ++i) {
    double x = a + (b - a) * i / 16.0;
    if (std::abs(p.alpha(x) - al) > 1e-13 * std::abs(al) || std::abs(p.beta(x) - be) > 1e-13 * std::abs(be) ||
        std::abs(p.gamma(x) - ga) > 1e-13 * (1.0 + std::abs(ga)))
      raise(ErrorKind::Oracle, "closed-form oracle needs constant coefficients");
  }
  return {al * be, ga};
}

enum class Modes { Dirichlet, Neumann, Periodic };

bool spans(const BoundaryConditions& bc, const std::array<std::array<cplx, 4>, 2>& target) {
  Eigen::Matrix4cd M;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) {
      M(r, c) = target[r][c];
      M(r + 2, c) = bc.rows[r][c];
    }
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(M);
  lu.setThreshold(1e-12);
  return lu.rank() == 2;
}

Modes detect_modes(const BoundaryConditions& bc) {
  if (bc.kind != DomainKind::FiniteInterval) raise(ErrorKind::Oracle, "Fourier oracle needs a finite interval");
  if (spans(bc, {{{1, 0, 0, 0}, {0, 0, 1, 0}}})) return Modes::Dirichlet;
  if (spans(bc, {{{0, 1, 0, 0}, {0, 0, 0, 1}}})) return Modes::Neumann;
  if (spans(bc, {{{1, 0, -1, 0}, {0, 1, 0, -1}}})) return Modes::Periodic;
  raise(ErrorKind::Oracle, "Fourier oracle supports Dirichlet, Neumann and periodic rows only");
}

struct Expansion {
  Modes modes;
  double xl, L;
  cplx ab, gamma;
  std::vector<int> index;
  std::vector<cplx> coef;

  double wavenumber(int m) const { return (modes == Modes::Periodic ? 2.0 : 1.0) * pi * m / L; }
  cplx mode(int m, double x) const {
    double kx = wavenumber(m) * (x - xl);
    switch (modes) {
      case Modes::Dirichlet: return std::sin(kx);
      case Modes::Neumann: return std::cos(kx);
      case Modes::Periodic: return std::exp(I * kx);
    }
    return 0.0;
  }
  cplx value(double x, double t) const {
    cplx sum = 0.0;
    for (size_t j = 0; j < index.size(); ++j) {
      double k = wavenumber(index[j]);
      sum += coef[j] * std::exp((gamma - ab * k * k) * t) * mode(index[j], x);
    }
    return sum;
  }
};

Expansion expand(const DispersionCache& cache, const BoundaryConditions& bc, const ScalarFn& q0, double t_min) {
  Constants c = constants_of(cache);
  Expansion e{detect_modes(bc), cache.lo(), cache.hi() - cache.lo(), c.ab, c.gamma, {}, {}};
  double decay = c.ab.real();
  if (decay <= 0.0) raise(ErrorKind::Oracle, "non-dissipative constant coefficients");
  double kmax = std::sqrt(40.0 / (decay * std::max(t_min, 1e-8)));
  int M = static_cast<int>(std::ceil(kmax * e.L / pi)) + 8;
  M = std::min(M, 20000);

  const GaussRule& g = gauss_legendre(16);
  size_t panels = std::max<size_t>(64, static_cast<size_t>(M) / 2);
  std::vector<double> xs, ws;
  double hp = e.L / static_cast<double>(panels);
  for (size_t p = 0; p < panels; ++p)
    for (size_t j = 0; j < g.x.size(); ++j) {
      xs.push_back(e.xl + hp * (static_cast<double>(p) + 0.5 * (g.x[j] + 1.0)));
      ws.push_back(0.5 * hp * g.w[j]);
    }
  std::vector<cplx> qv(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) qv[i] = q0(xs[i]);

  auto project = [&](int m) {
    cplx s = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) s += ws[i] * qv[i] * std::conj(e.mode(m, xs[i]));
    double norm = (e.modes == Modes::Periodic || (e.modes == Modes::Neumann && m == 0)) ? e.L : 0.5 * e.L;
    return s / norm;
  };
  auto add = [&](int m) {
    e.index.push_back(m);
    e.coef.push_back(project(m));
  };
  switch (e.modes) {
    case Modes::Dirichlet:
      for (int m = 1; m <= M; ++m) add(m);
      break;
    case Modes::Neumann:
      for (int m = 0; m <= M; ++m) add(m);
      break;
    case Modes::Periodic:
      add(0);
      for (int m = 1; m <= M / 2 + 4; ++m) {
        add(m);
        add(-m);
      }
      break;
  }
  return e;
}

}  // namespace

cplx fourier_exact(const DispersionCache& cache, const BoundaryConditions& bc, const ScalarFn& q0, double x,
                   double t) {
  return expand(cache, bc, q0, t).value(x, t);
}

std::vector<cplx> fourier_exact(const DispersionCache& cache, const BoundaryConditions& bc, const ScalarFn& q0,
                                const std::vector<double>& x, double t) {
  Expansion e = expand(cache, bc, q0, t);
  std::vector<cplx> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = e.value(x[i], t);
  return out;
}

cplx heat_kernel_convolution(const DispersionCache& cache, const ScalarFn& q0, double x, double t,
                             const std::vector<double>& breaks) {
  if (t <= 0.0) raise(ErrorKind::Argument, "heat kernel needs t > 0");
  Constants c = constants_of(cache);
  cplx s = 4.0 * c.ab * t;
  double decay = (1.0 / s).real();
  double W = std::sqrt(40.0 / decay);
  cplx norm = 1.0 / std::sqrt(pi * s);
  auto kernel = [&](double y) { return norm * std::exp(-(x - y) * (x - y) / s) * q0(y); };

  std::vector<double> cuts{x - W, x, x + W};
  for (double b : breaks)
    if (b > x - W && b < x + W) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  cplx sum = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    double re = GK::integrate([&](double y) { return kernel(y).real(); }, cuts[i], cuts[i + 1], 15, 1e-14);
    double im = GK::integrate([&](double y) { return kernel(y).imag(); }, cuts[i], cuts[i + 1], 15, 1e-14);
    sum += cplx(re, im);
  }
  return std::exp(c.gamma * t) * sum;
}

double erfc_solution(double x, double t, double xl, double ab) {
  return std::erfc((x - xl) / (2.0 * std::sqrt(ab * t)));
}

}  // namespace utm
