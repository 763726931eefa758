#pragma once

#include "utm/accum.hpp"
#include "utm/coefficients.hpp"

namespace utm {

enum class OracleFamily { C, S, E, Etilde };

struct SimplexOracleSpec {
  int max_n = 3;
  int order = 10;        // Gauss points per panel and dimension
  int panels = 4;        // initial panels per dimension
  int max_panels = 64;
  double rel_tol = 1e-9;
};

// Direct nested quadrature of the accumulation functions over the ordered
// simplex a < y_1 < ... < y_n < b (non-script normalization).
cplx simplex_oracle(const SpectralParam& k, double a, double b, int n, OracleFamily family,
                    const DispersionCache& cache, const SimplexOracleSpec& spec = {});

}  // namespace utm
