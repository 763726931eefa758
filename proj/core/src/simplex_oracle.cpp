#include "utm/simplex_oracle.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

namespace {

// Tabulated phase Omega(y) = int_a^y i k n, evaluated by local 8-point
// Lagrange interpolation on a fine uniform table.
class PhaseTable {
 public:
  PhaseTable(const DispersionCache& cache, const SpectralParam& s, double a, double b, int m = 8192)
      : a_(a), h_((b - a) / m), v_(m + 1) {
    const GaussRule& g = gauss_legendre(10);
    v_[0] = 0.0;
    for (int i = 0; i < m; ++i) {
      double xa = a + h_ * i, c = xa + 0.5 * h_;
      cplx acc = 0.0;
      for (int j = 0; j < 10; ++j) acc += g.w[j] * ikn(cache, s, c + 0.5 * h_ * g.x[j]);
      v_[i + 1] = v_[i] + 0.5 * h_ * acc;
    }
  }

  static cplx ikn(const DispersionCache& cache, const SpectralParam& s, double y) {
    CoefficientPoint c = cache.at(y);
    if (s.reduced) return I * s.k * c.mu;
    return I * s.k * c.mu * std::sqrt(1.0 + c.gamma / (s.k * s.k));
  }

  cplx operator()(double y) const {
    const int m = static_cast<int>(v_.size()) - 1;
    double t = (y - a_) / h_;
    int i0 = static_cast<int>(std::floor(t)) - 3;
    i0 = std::max(0, std::min(i0, m - 7));
    cplx sum = 0.0;
    for (int i = 0; i < 8; ++i) {
      double li = 1.0;
      for (int j = 0; j < 8; ++j)
        if (j != i) li *= (t - (i0 + j)) / static_cast<double>(i - j);
      sum += li * v_[i0 + i];
    }
    return sum;
  }

 private:
  double a_, h_;
  std::vector<cplx> v_;
};

cplx eta_at(const DispersionCache& cache, const SpectralParam& s, double y) {
  CoefficientPoint c = cache.at(y);
  if (s.reduced) return c.rho;
  return c.rho + 0.5 * c.dgamma / (s.k * s.k + c.gamma);
}

}  // namespace

cplx simplex_oracle(const SpectralParam& s, double a, double b, int n, OracleFamily family,
                    const DispersionCache& cache, const SimplexOracleSpec& spec) {
  if (n < 0 || n > spec.max_n) raise(ErrorKind::Argument, "simplex oracle: n out of range");
  if (!(b > a)) raise(ErrorKind::Argument, "simplex oracle: need a < b");
  PhaseTable omega(cache, s, a, b);
  const cplx Ob = omega(b);

  // Exponent for ordered points y_1..y_n, returning the family value.
  auto kernel = [&](const std::vector<double>& y) -> cplx {
    std::vector<cplx> O(n + 2);
    O[0] = 0.0;
    for (int p = 1; p <= n; ++p) O[p] = omega(y[p - 1]);
    O[n + 1] = Ob;
    cplx z = 0.0;
    switch (family) {
      case OracleFamily::C:
      case OracleFamily::S: {
        for (int p = 0; p <= n; ++p) z += (p % 2 == 0 ? 1.0 : -1.0) * (O[p + 1] - O[p]);
        cplx arg = -I * z;  // k * sum (-1)^p int n
        return family == OracleFamily::C ? std::cos(arg) : std::sin(arg);
      }
      case OracleFamily::E:
        for (int p = 0; p <= n; ++p) z += (1.0 - ((n - p) % 2 == 0 ? 1.0 : -1.0)) * (O[p + 1] - O[p]);
        return std::exp(z);
      case OracleFamily::Etilde:
        for (int p = 0; p <= n; ++p) z += (1.0 - (p % 2 == 0 ? 1.0 : -1.0)) * (O[p + 1] - O[p]);
        return std::exp(z);
    }
    return 0.0;
  };

  if (n == 0) return kernel({});

  const GaussRule& g = gauss_legendre(spec.order);
  auto nested = [&](int panels) {
    std::vector<double> y(n);
    std::function<cplx(int, double)> level = [&](int d, double lo) -> cplx {
      cplx acc = 0.0;
      double w = (b - lo) / panels;
      if (w <= 0.0) return 0.0;
      for (int q = 0; q < panels; ++q) {
        double pa = lo + w * q, c = pa + 0.5 * w;
        for (int j = 0; j < spec.order; ++j) {
          double yy = c + 0.5 * w * g.x[j];
          y[d] = yy;
          cplx inner = d + 1 == n ? kernel(y) : level(d + 1, yy);
          acc += 0.5 * w * g.w[j] * 0.5 * eta_at(cache, s, yy) * inner;
        }
      }
      return acc;
    };
    return level(0, a);
  };

  int panels = spec.panels;
  cplx prev = nested(panels);
  double bound = std::pow(cache.l1_eta_bound(std::abs(s.k), a, b), n);
  if (!std::isfinite(bound)) bound = 0.0;
  while (panels < spec.max_panels) {
    panels *= 2;
    cplx cur = nested(panels);
    double diff = std::abs(cur - prev);
    if (diff <= spec.rel_tol * std::abs(cur) + 1e-14 * (1.0 + bound)) return cur;
    prev = cur;
  }
  raise(ErrorKind::Quadrature, "simplex oracle did not converge");
}

}  // namespace utm
