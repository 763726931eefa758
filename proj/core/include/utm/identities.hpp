#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "utm/delta.hpp"

namespace utm {

struct IdentityCheck {
  std::string name;
  bool passed = true;
  double measured = 0.0;   // worst value over the samples
  double threshold = 0.0;
  std::string detail;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
  void append(const IdentityReport& other);
};

struct IdentityOptions {
  std::uint64_t seed = 1;
  int samples = 6;       // random spectral parameters per check
  int x_samples = 4;     // random interior points per spectral parameter
  int N = 6;             // series index
  int bc_order = 6;      // order of the BC identity (series index 2 N)
  double fd_step = 1e-3;
};

// Random points on the contour boundary (rays up to 6r and the arc).
std::vector<cplx> contour_samples(const DispersionCache& cache, int count, std::uint64_t seed);

// Finite differences of the tabulated series against the derivative identities.
IdentityReport derivative_identities(const DispersionCache& cache, const IdentityOptions& opt = {});
// Splitting identities at random interior points (all three domains).
IdentityReport composition_identities(const DispersionCache& cache, const IdentityOptions& opt = {});
// sum (-1)^n C_n sum C_n + sum (-1)^n S_n sum S_n = 1 over the finite interval.
IdentityReport bc_identity(const DispersionCache& cache, const IdentityOptions& opt = {});
// |value| < L1^n / (2^n n!) at every break of the tabulated series (n >= 1).
IdentityReport factorial_bounds(const DispersionCache& cache, const IdentityOptions& opt = {});
// |Delta / b0 - 1| < 1/2 at |k| = 4r, 8r, 16r on both rays.
IdentityReport asymptotic_sandwich(const DispersionCache& cache, const BoundaryConditions& bc,
                                   const IdentityOptions& opt = {});

// Everything applicable to one configuration.
IdentityReport run_identities(const DispersionCache& cache, const BoundaryConditions& bc,
                              const IdentityOptions& opt = {});

// One finite-interval configuration per boundary case.
struct CaseConfig {
  std::string label;
  CaseId expected;
  DispersionCache cache;
  BoundaryConditions bc;
};
std::vector<CaseConfig> boundary_case_configs();

}  // namespace utm
