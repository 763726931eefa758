#pragma once

#include <vector>

#include "utm/delta.hpp"
#include "utm/kernels.hpp"
#include "utm/solver.hpp"

namespace utm {

struct PdeResidual {
  double residual = 0.0;  // max |q_t - alpha (beta q_x)_x - gamma q - f| / scale with steps (h, dt)
  double coarse = 0.0;    // same with steps (2h, 2 dt) on the shared points
  double estimate = 0.0;  // fourth-order truncation estimate: coarse / 16
  double scale = 0.0;     // max |q| over the field
  size_t points = 0;
  bool ok(double factor = 10.0) const { return residual <= factor * estimate + 1e-14; }
};

// Field on uniform x and t grids with at least 9 points in each direction.
PdeResidual pde_residual(const SolutionField& field, const DispersionCache& cache, const ProblemData& data);

struct BcResidual {
  std::vector<double> row1, row2;  // per t (row2 unused on the half line)
  double max = 0.0;
  bool flagged = false;  // irregular problem: extrapolated diagnostic only
};

// Needs the boundary points and four neighbours on a uniform x-grid.
BcResidual bc_residual(const SolutionField& field, const BoundaryConditions& bc, const ProblemData& data);

struct IcResidual {
  double max_error = 0.0;  // interior max |q(x, t) - q0(x)|
  double qf_max = 0.0;
  double qb_max = 0.0;
};
IcResidual ic_residual(const SolutionField& field, const ProblemData& data, size_t it = 0);

}  // namespace utm
