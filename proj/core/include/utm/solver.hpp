#pragma once

#include <optional>
#include <string>
#include <vector>

#include "utm/contour.hpp"
#include "utm/delta.hpp"
#include "utm/kernels.hpp"

namespace utm {

struct SolveOptions {
  int N = -1;  // truncation order; negative selects it from the decay of Delta's terms
  double safety = 2.0;
  std::optional<double> theta0;
  std::optional<double> radius;
  double t_min = 1e-3;
  double tol = 1e-12;
  double contour_refine = 1.0;  // contour panel width factor
  double grid_refine = 1.0;     // y-quadrature panel width factor
  int ibp_depth = 2;            // integration-by-parts depth of the time transforms
  size_t max_nodes = 60000;
  double delta_min = 0.05;  // irregular problems: refused closer than this to the boundary
  int threads = 0;
};

struct SolveDiagnostics {
  size_t nodes = 0;
  double r = 0.0, theta0 = 0.0, K_max = 0.0;
  int N = 0;
  int max_level = 0;
  std::string boundary_case;
  bool regular = true;
  std::vector<std::string> warnings;
};

// Values are stored x-major: index ix * nt + it.
struct SolutionField {
  std::vector<double> x, t;
  std::vector<cplx> q, q0, qf, qb0, qb1;
  SolveDiagnostics diag;

  size_t nx() const { return x.size(); }
  size_t nt() const { return t.size(); }
  cplx at(size_t ix, size_t it) const { return q[ix * t.size() + it]; }
};

SolutionField solve_q(const DispersionCache& cache, const BoundaryConditions& bc, const ProblemData& data,
                      const std::vector<double>& x, const std::vector<double>& t, const SolveOptions& opt = {});

// Smallest N at which Delta's partial sums settle to 1e-11 at the slowest contour points.
int select_truncation(const DispersionCache& cache, const BoundaryConditions& bc, const ContourSpec& contour);

std::vector<double> linspace(double a, double b, size_t n);

}  // namespace utm
