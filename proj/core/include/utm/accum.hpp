#pragma once

#include <memory>
#include <vector>

#include "utm/coefficients.hpp"
#include "utm/grid.hpp"
#include "utm/types.hpp"

namespace utm {

inline constexpr int kCollocationOrder = 16;
inline constexpr int kMaxTruncation = 8;

// Spectral parameter. In reduced form (constant gamma) the value is the
// rescaled variable kk = k g(k), so that k n = kk mu and eta = rho.
struct SpectralParam {
  cplx k;
  bool reduced = false;

  static SpectralParam general(cplx k) { return {k, false}; }
  static SpectralParam reduced_form(cplx kk) { return {kk, true}; }
};

struct LocalWave {
  cplx ikn;  // i k n(k, x)
  cplx eta;  // (beta n)'/(beta n)
};

LocalWave local_wave(const CoefficientPoint& c, const SpectralParam& s);

// k n and sqrt(beta n) at a point for the given spectral parameter.
cplx k_n(const CoefficientPoint& c, const SpectralParam& s);
cplx sqrt_beta_n(const CoefficientPoint& c, const SpectralParam& s);

// Coefficients sampled on every point of a panel grid.
struct GridSamples {
  PanelGrid grid;
  std::vector<CoefficientPoint> coef;
};

std::shared_ptr<const GridSamples> sample_grid(const DispersionCache& cache, PanelGrid grid);

// Largest panel width resolving the local phase at this spectral parameter.
double phase_panel_width(const DispersionCache& cache, const SpectralParam& s);

enum class Direction { Forward, Backward };
enum class Family { CS, E, Etilde };

// Values of the two sign-pattern families J+ (sigma_p = 1 + (-1)^p) and
// J- (sigma_p = 1 - (-1)^p) for n = 0..N on a covered range of grid points.
// Forward series are anchored at the lower limit, backward at the upper.
class AccumSeries {
 public:
  AccumSeries() = default;

  cplx k() const { return param_.k; }
  const SpectralParam& param() const { return param_; }
  Direction direction() const { return dir_; }
  Family family() const { return family_; }
  void set_family(Family f) { family_ = f; }
  int N() const { return N_; }
  double anchor() const { return samples_->grid.x(anchor_); }
  size_t anchor_point() const { return anchor_; }
  size_t first() const { return first_; }
  size_t last() const { return last_; }
  bool covers(size_t i) const { return i >= first_ && i <= last_; }
  const GridSamples& samples() const { return *samples_; }
  const PanelGrid& grid() const { return samples_->grid; }
  bool resolved() const { return resolved_; }
  double worst_tail() const { return worst_tail_; }

  // Integral of i k n between the anchor and x_i (always oriented lower to upper limit).
  cplx phase(size_t i) const { return phase_[i]; }
  cplx jp(int n, size_t i) const { return jp_[idx(n, i)]; }
  cplx jm(int n, size_t i) const { return jm_[idx(n, i)]; }

  cplx script_c(int n, size_t i) const { return 0.5 * (jp(n, i) + jm(n, i)); }
  cplx script_s(int n, size_t i) const { return (jp(n, i) - jm(n, i)) / cplx(0.0, 2.0); }
  cplx c(int n, size_t i) const { return std::exp(-phase(i)) * script_c(n, i); }
  cplx s(int n, size_t i) const { return std::exp(-phase(i)) * script_s(n, i); }
  // E_n^{(x, b)} from a backward series.
  cplx e(int n, size_t i) const { return (n % 2 == 0) ? jm(n, i) : jp(n, i); }
  // tilde E_n^{(a, x)} from a forward series.
  cplx etilde(int n, size_t i) const { return jm(n, i); }

  // Spectrally interpolated values at an arbitrary covered x.
  struct Point {
    double x = 0.0;
    cplx phase;
    std::vector<cplx> jp, jm;
    cplx script_c(int n) const { return 0.5 * (jp[n] + jm[n]); }
    cplx script_s(int n) const { return (jp[n] - jm[n]) / cplx(0.0, 2.0); }
    cplx c(int n) const { return std::exp(-phase) * script_c(n); }
    cplx s(int n) const { return std::exp(-phase) * script_s(n); }
    cplx e(int n) const { return (n % 2 == 0) ? jm[n] : jp[n]; }
    cplx etilde(int n) const { return jm[n]; }
  };
  Point at(double x) const;
  Point at_point(size_t i) const;

 private:
  friend AccumSeries propagate(std::shared_ptr<const GridSamples>, const SpectralParam&, Direction, size_t, int,
                               double);
  size_t idx(int n, size_t i) const { return static_cast<size_t>(n) * npts_ + i; }

  std::shared_ptr<const GridSamples> samples_;
  SpectralParam param_{};
  Direction dir_ = Direction::Forward;
  Family family_ = Family::CS;
  int N_ = 0;
  size_t npts_ = 0, anchor_ = 0, first_ = 0, last_ = 0;
  bool resolved_ = true;
  double worst_tail_ = 0.0;
  std::vector<cplx> phase_, jp_, jm_;
  std::vector<cplx> ikn_, eta_;
};

inline constexpr double kTailTolerance = 1e-12;

// Propagate from the break at grid point `anchor_point`: forward to the end
// of the grid, backward to its start. resolved() reports the Legendre-tail
// test at relative tolerance `tol`.
AccumSeries propagate(std::shared_ptr<const GridSamples> samples, const SpectralParam& s, Direction dir,
                      size_t anchor_point, int N, double tol = kTailTolerance);

// Build a grid on [a, b] containing `points`, refined for the phase at s,
// and propagate; refines dyadically until resolved (StiffnessError otherwise).
AccumSeries propagate_on(const DispersionCache& cache, const SpectralParam& s, double a, double b,
                         const std::vector<double>& points, Direction dir, int N);

AccumSeries accum_cs_forward(const SpectralParam& s, double a, const std::vector<double>& grid, int N,
                             const DispersionCache& cache);
AccumSeries accum_cs_backward(const SpectralParam& s, double b, const std::vector<double>& grid, int N,
                              const DispersionCache& cache);
AccumSeries accum_e_tail(const SpectralParam& s, const std::vector<double>& grid, int N,
                         const DispersionCache& cache);
AccumSeries accum_e_tilde_tail(const SpectralParam& s, const std::vector<double>& grid, int N,
                               const DispersionCache& cache);

// Script values over the covered interval: multiply by exp(phase).
struct ScriptCS {
  std::vector<cplx> C, S;
};
ScriptCS script_cs(const AccumSeries& series, size_t i);

}  // namespace utm
