#include "utm/timeint.hpp"

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

cplx ChebSeries::operator()(double s) const {
  if (c.empty()) return 0.0;
  double x = t > 0.0 ? 2.0 * s / t - 1.0 : 0.0;
  // Clenshaw.
  cplx b1 = 0.0, b2 = 0.0;
  for (int j = degree(); j >= 1; --j) {
    cplx b0 = 2.0 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

std::vector<double> cheb_points(double t, int degree) {
  std::vector<double> s(degree + 1);
  for (int j = 0; j <= degree; ++j) {
    double x = degree == 0 ? 0.0 : std::cos(pi * (degree - j) / degree);
    s[j] = 0.5 * t * (x + 1.0);
  }
  return s;
}

ChebSeries cheb_from_values(double t, const std::vector<cplx>& v) {
  const int n = static_cast<int>(v.size()) - 1;
  ChebSeries out;
  out.t = t;
  out.c.assign(n + 1, 0.0);
  if (n == 0) {
    out.c[0] = v[0];
    return out;
  }
  // Values at x_j = cos(pi (n - j)/n); type-I DCT.
  for (int m = 0; m <= n; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      double w = (j == 0 || j == n) ? 0.5 : 1.0;
      acc += w * v[j] * std::cos(pi * m * (n - j) / n);
    }
    double scale = (m == 0 || m == n) ? 1.0 / n : 2.0 / n;
    out.c[m] = scale * acc;
  }
  return out;
}

ChebSeries cheb_fit(const std::function<cplx(double)>& g, double t, double tol, int max_degree) {
  int deg = 8;
  for (;;) {
    auto s = cheb_points(t, deg);
    std::vector<cplx> v(s.size());
    for (size_t j = 0; j < s.size(); ++j) v[j] = g(s[j]);
    ChebSeries fit = cheb_from_values(t, v);
    double scale = 0.0;
    for (cplx c : fit.c) scale = std::max(scale, std::abs(c));
    double tail = 0.0;
    for (int j = std::max(0, deg - 2); j <= deg; ++j) tail = std::max(tail, std::abs(fit.c[j]));
    if (tail <= tol * std::max(scale, 1e-300) || scale == 0.0) {
      // Trim negligible trailing coefficients.
      int last = deg;
      while (last > 0 && std::abs(fit.c[last]) <= 1e-3 * tol * scale) --last;
      fit.c.resize(last + 1);
      return fit;
    }
    if (deg >= max_degree) return fit;
    deg *= 2;
  }
}

ChebSeries cheb_derivative(const ChebSeries& s) {
  ChebSeries d;
  d.t = s.t;
  const int n = s.degree();
  if (n <= 0) {
    d.c = {0.0};
    return d;
  }
  std::vector<cplx> c(n + 1, 0.0);
  // c'_{j-1} = c'_{j+1} + 2 j c_j, then halve c'_0.
  for (int j = n; j >= 1; --j) c[j - 1] = (j + 1 <= n ? c[j + 1] : 0.0) + 2.0 * j * s.c[j];
  c[0] *= 0.5;
  c.resize(n);
  double scale = 2.0 / s.t;
  for (auto& v : c) v *= scale;
  d.c = c;
  return d;
}

std::vector<cplx> decay_moments(cplx k2, double t, int degree, double span) {
  if (span <= 0.0) span = t;
  // u = t - s in [0, t]; integrand exp(-k2 u) T_j(1 - 2u/t).
  std::vector<cplx> M(degree + 1, 0.0);
  const GaussRule& g = gauss_legendre(16);
  const double ak2 = std::abs(k2);
  const double re = k2.real();
  double umax = t;
  if (re > 0.0) umax = std::min(t, 50.0 / re);
  // Panel width resolves the exp oscillation/decay and the polynomial degree.
  double w = std::min(umax, std::max(1.0 / std::max(ak2, 1e-300), 0.0) * 2.0);
  w = std::min(w, span * 2.0 / std::max(1, degree));
  if (w <= 0.0) w = umax;
  int panels = std::max(1, static_cast<int>(std::ceil(umax / w - 1e-9)));
  if (panels > 200000) raise(ErrorKind::Budget, "decay_moments: too many panels");
  w = umax / panels;
  std::vector<double> T(degree + 1);
  for (int p = 0; p < panels; ++p) {
    double a = w * p, c = a + 0.5 * w;
    for (int j = 0; j < 16; ++j) {
      double u = c + 0.5 * w * g.x[j];
      cplx e = std::exp(-k2 * u) * (0.5 * w * g.w[j]);
      double x = 2.0 * (t - u) / span - 1.0;
      T[0] = 1.0;
      if (degree >= 1) T[1] = x;
      for (int m = 2; m <= degree; ++m) T[m] = 2.0 * x * T[m - 1] - T[m - 2];
      for (int m = 0; m <= degree; ++m) M[m] += e * T[m];
    }
  }
  return M;
}

cplx decay_integral(cplx k2, double t, const ChebSeries& g) {
  auto M = decay_moments(k2, t, g.degree(), g.t);
  cplx acc = 0.0;
  for (int j = 0; j <= g.degree(); ++j) acc += g.c[j] * M[j];
  return acc;
}

cplx Fm(cplx k2, double t, const std::function<cplx(double)>& f) {
  if ((k2 * t).real() > 700.0) raise(ErrorKind::Stability, "F_m: exp(k^2 t) overflows");
  ChebSeries fs = cheb_fit(f, t);
  return std::exp(k2 * t) * decay_integral(k2, t, fs);
}

cplx fm_frak_decayed(cplx k2, double t, const ChebSeries& f, int depth) {
  const cplx E = std::exp(-k2 * t);
  ChebSeries d1 = cheb_derivative(f);
  if (depth <= 1) return -f(0.0) * E / k2 - decay_integral(k2, t, d1) / k2;
  ChebSeries d2 = cheb_derivative(d1);
  const cplx k4 = k2 * k2;
  return -f(0.0) * E / k2 + d1(0.0) * E / k4 + decay_integral(k2, t, d2) / k4;
}

cplx fm_frak_decayed(cplx k2, double t, const std::function<cplx(double)>& f, int depth) {
  return fm_frak_decayed(k2, t, cheb_fit(f, t), depth);
}

cplx Fm_frak(cplx k2, double t, const std::function<cplx(double)>& f) {
  if ((k2 * t).real() > 700.0) raise(ErrorKind::Stability, "F_m: exp(k^2 t) overflows");
  return fm_frak_decayed(k2, t, f, 1) * std::exp(k2 * t);
}

}  // namespace utm
