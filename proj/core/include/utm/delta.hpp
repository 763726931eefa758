#pragma once

#include <array>
#include <string>
#include <vector>

#include "utm/accum.hpp"
#include "utm/coefficients.hpp"

namespace utm {

struct BoundaryConditions {
  DomainKind kind = DomainKind::FiniteInterval;
  // Half line: a0 q(x_l) + a1 q_x(x_l) = f0.
  cplx a0 = 0.0, a1 = 0.0;
  // Finite interval rows (a_l1, a_l2, b_l1, b_l2):
  //   a_l1 q(x_l) + a_l2 q_x(x_l) + b_l1 q(x_r) + b_l2 q_x(x_r) = f_{l-1}.
  std::array<std::array<cplx, 4>, 2> rows{};

  static BoundaryConditions finite(const std::array<cplx, 4>& row1, const std::array<cplx, 4>& row2);
  static BoundaryConditions half_line(cplx a0, cplx a1);
  static BoundaryConditions whole_line();

  // Determinant of columns i and j (1-based).
  cplx minor(int i, int j) const;
  double scale() const;
  void validate() const;
};

enum class CaseId { Case1, Case2, Case3, Case4, Unsupported };
std::string to_string(CaseId id);

struct BoundaryCase {
  CaseId id = CaseId::Unsupported;
  bool regular = false;
  cplx m_c0, m_c1, m_s, u_plus, u_minus;
  std::string note;
};

BoundaryCase classify(const BoundaryConditions& bc, const DispersionCache& cache);

// k n, sqrt(beta n) and beta at the ends of the finite interval (or x_l).
struct EndpointData {
  cplx kk;  // spectral variable entering a(k): k, or the reduced variable
  cplx kn_l, kn_r, sbn_l, sbn_r, beta_l, beta_r;
};
EndpointData endpoint_data(const DispersionCache& cache, const SpectralParam& s);

// a(k), c_n(k), s_n(k) of the finite-interval characteristic function.
struct DeltaCoefficients {
  cplx a;
  std::vector<cplx> c, s;
};
DeltaCoefficients delta_coefficients(const BoundaryConditions& bc, const EndpointData& e, int N);

// Finite interval: forward series anchored at x_l covering x_r.
cplx delta_fi(const BoundaryConditions& bc, const AccumSeries& forward, const DispersionCache& cache);
// k Delta / (2 i Xi): entire and even in the spectral variable.
cplx characteristic_fi(const BoundaryConditions& bc, const AccumSeries& forward, const DispersionCache& cache);
// Half line: tail series covering x_l.
cplx delta_hl(const BoundaryConditions& bc, const AccumSeries& tail, const DispersionCache& cache);
// Whole line: tilde series and tail series split at a shared grid point.
cplx delta_wl(const AccumSeries& tilde, const AccumSeries& tail, size_t split_point);

// Delta truncated at every order M = 0..N from one pair of series
// (forward and backward on a shared grid covering the domain).
std::vector<cplx> delta_partial_sums(const BoundaryConditions& bc, const AccumSeries& forward,
                                     const AccumSeries& backward, const DispersionCache& cache);

// Convenience: build the series at k and evaluate.
cplx delta_at(const SpectralParam& s, const BoundaryConditions& bc, const DispersionCache& cache, int N);

cplx b0_asymptotic(cplx k, const BoundaryCase& bcase, const BoundaryConditions& bc, const DispersionCache& cache);

}  // namespace utm
