#pragma once

#include <functional>
#include <vector>

#include "utm/types.hpp"

namespace utm {

// g(s) = sum_j c_j T_j(2 s / t - 1) on [0, t].
struct ChebSeries {
  double t = 0.0;
  std::vector<cplx> c;
  cplx operator()(double s) const;
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

// Chebyshev points of the second kind mapped to [0, t].
std::vector<double> cheb_points(double t, int degree);
ChebSeries cheb_from_values(double t, const std::vector<cplx>& values);
// Adaptive fit: doubles the degree until the trailing coefficients fall below tol.
ChebSeries cheb_fit(const std::function<cplx(double)>& g, double t, double tol = 1e-14, int max_degree = 256);
ChebSeries cheb_derivative(const ChebSeries& s);

// M_j(k2, t) = int_0^t exp(-k2 (t - s)) T_j(2 s / T - 1) ds, j = 0..degree,
// for a series on [0, T] (T = span, defaulting to t).
std::vector<cplx> decay_moments(cplx k2, double t, int degree, double span = 0.0);
// int_0^t exp(-k2 (t - s)) g(s) ds for a series g on [0, T >= t].
cplx decay_integral(cplx k2, double t, const ChebSeries& g);

// F_m(k2, t) = int_0^t exp(k2 s) f(s) ds; StabilityError if exp(k2 t) overflows.
cplx Fm(cplx k2, double t, const std::function<cplx(double)>& f);

// Deformed boundary transform with the exp(-k2 t) factor folded in:
//   depth 1: -f(0) E/k2 - (1/k2) int_0^t exp(-k2 (t-s)) f'(s) ds
//   depth 2: -f(0) E/k2 + f'(0) E/k4 + (1/k4) int_0^t exp(-k2 (t-s)) f''(s) ds
// with E = exp(-k2 t). Depth 2 drops the f'(t)/k4 term, which is analytic and
// decaying in the region and integrates to zero along the contour.
// The series may live on [0, T] with T >= t.
cplx fm_frak_decayed(cplx k2, double t, const ChebSeries& f, int depth = 1);
cplx fm_frak_decayed(cplx k2, double t, const std::function<cplx(double)>& f, int depth = 1);
// Depth-1 value without the exp(-k2 t) factor (guarded).
cplx Fm_frak(cplx k2, double t, const std::function<cplx(double)>& f);

}  // namespace utm
