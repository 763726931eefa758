#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "utm/coefficients.hpp"
#include "utm/errors.hpp"

namespace utm::test {

inline std::string fixture_path(const std::string& name) { return std::string(UTM_FIXTURE_DIR) + "/" + name; }
inline std::string config_path(const std::string& name) { return std::string(UTM_CONFIG_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random point on the boundary of the exterior contour region, |k| in [r, 6r].
inline cplx contour_point(std::mt19937_64& rng, const ContourParams& cp) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double v = u(rng);
  if (v < 1.0 / 3.0) return std::polar(cp.r, cp.theta0 + (pi - 2.0 * cp.theta0) * u(rng));
  const double rho = cp.r * (1.0 + 5.0 * u(rng));
  return std::polar(rho, v < 2.0 / 3.0 ? cp.theta0 : pi - cp.theta0);
}

}  // namespace utm::test
