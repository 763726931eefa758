#pragma once

#include <functional>
#include <vector>

#include "utm/delta.hpp"

namespace utm {

struct EigenPair {
  cplx kappa;   // root of Delta in the closed upper half plane
  cplx lambda;  // -kappa^2
  cplx kk;      // spectral variable the root was found in (reduced or k)
  bool reduced = false;
  int N_used = 0;            // order N: accumulation terms up to index 2N
  int multiplicity = 1;      // 2 when emitted from a clustered pair
  cplx C, S;                 // eigenfunction coefficients
  double residual = 0.0;
};

// Rectangle [lo.real, hi.real] x [lo.imag, hi.imag] in the search variable:
// the reduced variable kk = sqrt(k^2 + gamma) when gamma is constant, k otherwise.
struct SearchRegion {
  cplx lo, hi;
  size_t max_roots = 64;
  int max_depth = 40;
};

struct EigenOptions {
  double newton_tol = 1e-14;
  int boundary_nodes = 512;
  int threads = 0;
  bool compute_residual = true;
};

// Series index cap for order N.
inline int series_index(int N) { return 2 * N; }

// Truncated characteristic function k Delta / (2 i Xi) at order N (series index 2N).
cplx characteristic(const SpectralParam& s, const BoundaryConditions& bc, const DispersionCache& cache, int N);

// Number of zeros of f inside the rectangle (argument principle).
int winding_number(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, int min_nodes = 512);

std::vector<EigenPair> find_eigenvalues(const BoundaryConditions& bc, const DispersionCache& cache,
                                        const SearchRegion& region, int N, const EigenOptions& opt = {});

// Seeds kappa_m for m = 0..m_max (gamma constant); rectangle centres otherwise.
std::vector<cplx> initial_guesses(const DispersionCache& cache, int m_max);
// Rectangle in the search variable enclosing the first `count` eigenvalues.
SearchRegion default_region(const DispersionCache& cache, int count);

// Fills C and S for a refined pair.
void eigen_coefficients(EigenPair& pair, const BoundaryConditions& bc, const DispersionCache& cache);
cplx eigenfunction(const EigenPair& pair, const DispersionCache& cache, double x);
std::vector<cplx> eigenfunction(const EigenPair& pair, const DispersionCache& cache, const std::vector<double>& x);
// Max of the normalized ODE residual on a uniform grid and both BC-row residuals.
double eigen_residual(const EigenPair& pair, const DispersionCache& cache, const BoundaryConditions& bc,
                      size_t n = 400);

}  // namespace utm
