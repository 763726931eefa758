#pragma once

#include <optional>
#include <vector>

#include "utm/coefficients.hpp"
#include "utm/types.hpp"

namespace utm {

enum class Segment { LeftRay, Arc, RightRay };

// Truncated boundary of {|k| > r, theta0 < arg k < pi - theta0}, traversed
// from infinity along arg k = pi - theta0, clockwise along |k| = r, then out
// along arg k = theta0. Weights include dk.
struct ContourSpec {
  double r = 0.0, theta0 = 0.0, K_max = 0.0;
  std::vector<cplx> nodes, weights;
  std::vector<Segment> segments;
  size_t size() const { return nodes.size(); }
  size_t count(Segment s) const;
};

struct ContourOptions {
  double safety = 2.0;
  std::optional<double> theta0;  // override; must lie in [theta1, pi/4)
  std::optional<double> radius;  // override; must not be below the computed radius
  double t_max = 1.0;            // largest output time (oscillation of exp(-k^2 t))
  double refine = 1.0;           // panel width factor
  size_t max_nodes = 60000;
};

double solve_kmax(double theta0, double t_min, double tol, double r);

ContourSpec build_contour(const DispersionCache& cache, double t_min, double tol = 1e-12,
                          const ContourOptions& opt = {});

}  // namespace utm
