#pragma once

#include <vector>

#include "utm/types.hpp"

namespace utm {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

// Collocation operators for one p-point Gauss panel on [-1, 1].
//   S rows 0..p-1: integral from -1 to node i of the interpolant; row p: to +1.
//   A: Legendre analysis, c_m = sum_j A[m*p + j] v_j.
struct LegendrePanel {
  int p = 0;
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> S;
  std::vector<double> A;

  std::vector<double> integral_row(double tau) const;
  std::vector<double> interp_row(double tau) const;
};

const LegendrePanel& legendre_panel(int p);

// |c_{p-1}| + |c_{p-2}| of the Legendre expansion of nodal values v.
double legendre_tail(const LegendrePanel& lp, const cplx* v);
double legendre_tail(const LegendrePanel& lp, const double* v);

// Legendre polynomials P_0..P_m at t.
void legendre_values(int m, double t, double* out);

}  // namespace utm
