#include "utm/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "utm/errors.hpp"

namespace utm {

namespace {

GaussRule make_gauss(int n) {
  GaussRule rule;
  auto zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> xs;
  for (double z : zeros) {
    if (z == 0.0) {
      xs.push_back(0.0);
    } else {
      xs.push_back(z);
      xs.push_back(-z);
    }
  }
  std::sort(xs.begin(), xs.end());
  rule.x = xs;
  rule.w.resize(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double dp = boost::math::legendre_p_prime(n, xs[i]);
    rule.w[i] = 2.0 / ((1.0 - xs[i] * xs[i]) * dp * dp);
  }
  return rule;
}

LegendrePanel make_panel(int p) {
  LegendrePanel lp;
  lp.p = p;
  const GaussRule& g = gauss_legendre(p);
  lp.t = g.x;
  lp.w = g.w;
  lp.A.assign(static_cast<size_t>(p) * p, 0.0);
  std::vector<double> P(p + 1);
  for (int j = 0; j < p; ++j) {
    legendre_values(p, lp.t[j], P.data());
    for (int m = 0; m < p; ++m) lp.A[m * p + j] = 0.5 * (2 * m + 1) * lp.w[j] * P[m];
  }
  lp.S.assign(static_cast<size_t>(p + 1) * p, 0.0);
  for (int i = 0; i <= p; ++i) {
    double tau = i < p ? lp.t[i] : 1.0;
    auto row = lp.integral_row(tau);
    for (int j = 0; j < p; ++j) lp.S[i * p + j] = row[j];
  }
  return lp;
}

}  // namespace

void legendre_values(int m, double t, double* out) {
  out[0] = 1.0;
  if (m == 0) return;
  out[1] = t;
  for (int n = 1; n < m; ++n) out[n + 1] = ((2 * n + 1) * t * out[n] - n * out[n - 1]) / (n + 1);
}

std::vector<double> LegendrePanel::integral_row(double tau) const {
  // int_{-1}^{tau} P_m = (P_{m+1} - P_{m-1}) / (2m + 1), m >= 1; tau + 1 for m = 0.
  std::vector<double> P(p + 2);
  legendre_values(p + 1, tau, P.data());
  std::vector<double> Im(p);
  Im[0] = tau + 1.0;
  for (int m = 1; m < p; ++m) Im[m] = (P[m + 1] - P[m - 1]) / (2 * m + 1);
  std::vector<double> row(p, 0.0);
  for (int j = 0; j < p; ++j) {
    double s = 0.0;
    for (int m = 0; m < p; ++m) s += A[m * p + j] * Im[m];
    row[j] = s;
  }
  return row;
}

std::vector<double> LegendrePanel::interp_row(double tau) const {
  std::vector<double> P(p);
  legendre_values(p - 1, tau, P.data());
  std::vector<double> row(p, 0.0);
  for (int j = 0; j < p; ++j) {
    double s = 0.0;
    for (int m = 0; m < p; ++m) s += A[m * p + j] * P[m];
    row[j] = s;
  }
  return row;
}

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 512) raise(ErrorKind::Argument, "gauss_legendre: order out of range");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(make_gauss(n));
  return *slot;
}

const LegendrePanel& legendre_panel(int p) {
  if (p < 2) raise(ErrorKind::Argument, "legendre_panel: order must be >= 2");
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<LegendrePanel>> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(p);
    if (it != cache.end()) return *it->second;
  }
  auto built = std::make_unique<LegendrePanel>(make_panel(p));
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[p];
  if (!slot) slot = std::move(built);
  return *slot;
}

double legendre_tail(const LegendrePanel& lp, const cplx* v) {
  const int p = lp.p;
  cplx c1 = 0.0, c2 = 0.0;
  for (int j = 0; j < p; ++j) {
    c1 += lp.A[(p - 1) * p + j] * v[j];
    c2 += lp.A[(p - 2) * p + j] * v[j];
  }
  return std::abs(c1) + std::abs(c2);
}

double legendre_tail(const LegendrePanel& lp, const double* v) {
  const int p = lp.p;
  double c1 = 0.0, c2 = 0.0;
  for (int j = 0; j < p; ++j) {
    c1 += lp.A[(p - 1) * p + j] * v[j];
    c2 += lp.A[(p - 2) * p + j] * v[j];
  }
  return std::abs(c1) + std::abs(c2);
}

}  // namespace utm
