#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "utm/accum.hpp"
#include "utm/delta.hpp"
#include "utm/timeint.hpp"

namespace utm {

// Initial, forcing and boundary data. Empty functions mean zero data.
struct ProblemData {
  std::function<cplx(double)> q0;
  std::function<cplx(double, double)> f;
  std::function<cplx(double, double)> f_t;  // optional; differentiated spectrally when absent
  std::function<cplx(double)> f0, f1;
  std::vector<double> breaks;  // known kinks or jumps of q0 and f in x

  bool has_q0() const { return static_cast<bool>(q0); }
  bool has_f() const { return static_cast<bool>(f); }
  bool has_boundary(int m) const { return m == 0 ? static_cast<bool>(f0) : static_cast<bool>(f1); }
};

struct DataCheck {
  bool ok = true;
  double q0_l1 = 0.0, f_sup = 0.0, ft_sup = 0.0, f0_lip = 0.0, f1_lip = 0.0;
  std::string message;
};
// Samples the integrability and smoothness requirements on the data.
DataCheck check_data(const ProblemData& data, const DispersionCache& cache, double T);

// All series of one spectral parameter on a shared grid. Immutable after
// construction, apart from lazily built wrap series (thread-compatible only).
class KernelContext {
 public:
  KernelContext(const DispersionCache& cache, const BoundaryConditions& bc, const SpectralParam& s,
                std::shared_ptr<const GridSamples> samples, int N);

  // Builds a phase-resolved grid containing `points` as breaks.
  static KernelContext build(const DispersionCache& cache, const BoundaryConditions& bc, const SpectralParam& s,
                             const std::vector<double>& points, int N);

  cplx k() const { return s_.k; }
  const SpectralParam& param() const { return s_; }
  int N() const { return N_; }
  DomainKind kind() const { return bc_.kind; }
  const BoundaryConditions& bc() const { return bc_; }
  const DispersionCache& cache() const { return *cache_; }
  const PanelGrid& grid() const { return samples_->grid; }
  const GridSamples& samples() const { return *samples_; }
  const AccumSeries& forward() const { return fwd_; }
  const AccumSeries& backward() const { return bwd_; }
  bool resolved() const { return fwd_.resolved() && bwd_.resolved(); }
  cplx Xi() const { return xi_; }
  cplx delta() const { return delta_; }
  cplx sbn(size_t i) const { return sbn_[i]; }

  size_t point(double x) const;

  cplx psi_points(size_t ix, size_t iy) const;
  cplx psi(double x, double y) const { return psi_points(point(x), point(y)); }
  // B_m(k, x), including the 1/sqrt(beta n)(x) factor.
  cplx boundary_kernel_point(int m, size_t ix) const;

  // out[j] = (1/sqrt(beta n)(x)) sum_y w_y Psi(x, y) g_j(y) / sqrt(beta n)(y) over grid nodes,
  // for column-major data g (g[j * npts + iy]).
  void transform(size_t ix, const std::vector<cplx>& g, size_t ncols, cplx* out) const;
  // Same for several grid points at once; out[i * ncols + j].
  void transform_all(const std::vector<size_t>& xs, const std::vector<cplx>& g, size_t ncols, cplx* out) const;

 private:
  void build_vectors();
  cplx main_term(size_t lo_pt, size_t hi_pt) const;
  cplx wrap_lower(size_t ix, size_t iy, const AccumSeries* w) const;
  cplx wrap_upper(size_t ix, size_t iy, const AccumSeries* w) const;
  bool wrap_needed_lower(size_t ix) const;
  bool wrap_needed_upper(size_t ix) const;

  const DispersionCache* cache_;
  BoundaryConditions bc_;
  SpectralParam s_;
  std::shared_ptr<const GridSamples> samples_;
  int N_;
  AccumSeries fwd_, bwd_;
  EndpointData ends_{};
  cplx xi_, delta_, pref_;
  cplx wrap12_, wrap34_;
  size_t m_ = 0;  // length of the L and R vectors
  std::vector<cplx> L_, R_, sbn_;
};

cplx psi(const KernelContext& ctx, double x, double y);
cplx boundary_kernel(const KernelContext& ctx, int m, double x);
cplx phi0(const KernelContext& ctx, double x, const ProblemData& data);
// Deformed forcing term with exp(-k^2 t) folded in.
cplx phi_f_deformed(const KernelContext& ctx, double x, double t, const ProblemData& data, int depth = 1);

// Chebyshev data of f/alpha in time at every grid node, shared by all spectral parameters.
struct ForcingSeries {
  double T = 0.0;
  std::vector<ChebSeries> d1, d2;  // first and second time derivatives per point
  std::vector<cplx> v0, d0;        // f_alpha(y, 0) and its time derivative at 0
  bool present = false;
};
ForcingSeries forcing_series(const ProblemData& data, const GridSamples& samples, double T);
// frak f_alpha(y, t) exp(-k2 t) at every grid point.
std::vector<cplx> forcing_transform(const ForcingSeries& fs, cplx k2, double t, int depth);

}  // namespace utm
