#pragma once

#include <vector>

#include "utm/delta.hpp"
#include "utm/kernels.hpp"
#include "utm/solver.hpp"

namespace utm {

// Uniform finite-difference grid on [lo, hi] with nx intervals.
struct FDGrid {
  double lo = 0.0, hi = 1.0;
  size_t nx = 512;
  double dt = 0.0;  // target step; zero means dx
  double h() const { return (hi - lo) / static_cast<double>(nx); }
};

struct CnOptions {
  size_t nx = 512;
  double dt = 0.0;          // zero: dx
  bool richardson = true;   // combine with the (2 nx, dt / 2) run
  int rannacher_steps = 2;  // leading steps replaced by half-step backward Euler
  double window = 0.0;      // unbounded kinds: half-width (whole line) or length (half line); zero: 20
};

// Crank-Nicolson for q_t = alpha (beta q_x)_x + gamma q + f with the boundary
// rows imposed algebraically (second-order one-sided derivatives). Unbounded
// domains are truncated with far-field Dirichlet rows. Output interpolated
// cubically onto x. Only the total field q is filled.
SolutionField crank_nicolson(const DispersionCache& cache, const BoundaryConditions& bc, const ProblemData& data,
                             const std::vector<double>& x, const std::vector<double>& t,
                             const CnOptions& opt = {});

struct MatrixEigsOptions {
  size_t n_grid = 400;
  bool richardson = true;  // two grids n and 2n
  size_t keep = 0;         // number of eigenvalues returned (0: all of the coarse grid)
};

struct MatrixEigenvalue {
  int m = 0;
  cplx lambda;
  size_t grid = 0;
  bool extrapolated = false;
};

// Eigenvalues of the FD operator alpha (beta y')' + gamma y with the BC rows,
// sorted by |lambda|.
std::vector<MatrixEigenvalue> matrix_eigs(const DispersionCache& cache, const BoundaryConditions& bc,
                                          const MatrixEigsOptions& opt = {});

// Truncated eigenfunction series for constant coefficients with homogeneous
// Dirichlet, Neumann or periodic rows. Only q0 data is supported.
cplx fourier_exact(const DispersionCache& cache, const BoundaryConditions& bc, const ScalarFn& q0, double x,
                   double t);
std::vector<cplx> fourier_exact(const DispersionCache& cache, const BoundaryConditions& bc, const ScalarFn& q0,
                                const std::vector<double>& x, double t);

// exp(gamma t) times the Gaussian convolution of q0 (constant coefficients, whole line).
cplx heat_kernel_convolution(const DispersionCache& cache, const ScalarFn& q0, double x, double t,
                             const std::vector<double>& breaks = {});

// q_t = ab q_xx on x > xl, q(xl, t) = 1, q(x, 0) = 0.
double erfc_solution(double x, double t, double xl = 0.0, double ab = 1.0);

}  // namespace utm
