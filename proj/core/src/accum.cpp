#include "utm/accum.hpp"

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

namespace {

constexpr double kTailAbs = 1e-15;
constexpr int kMaxLevels = 12;

}  // namespace

LocalWave local_wave(const CoefficientPoint& c, const SpectralParam& s) {
  LocalWave w;
  if (s.reduced) {
    w.ikn = I * s.k * c.mu;
    w.eta = c.rho;
  } else {
    cplx k2 = s.k * s.k;
    cplx g = std::sqrt(1.0 + c.gamma / k2);
    w.ikn = I * s.k * c.mu * g;
    w.eta = c.rho + 0.5 * c.dgamma / (k2 + c.gamma);
  }
  return w;
}

cplx k_n(const CoefficientPoint& c, const SpectralParam& s) {
  if (s.reduced) return s.k * c.mu;
  return s.k * c.mu * std::sqrt(1.0 + c.gamma / (s.k * s.k));
}

cplx sqrt_beta_n(const CoefficientPoint& c, const SpectralParam& s) {
  if (s.reduced) return c.sqrt_beta_mu;
  return c.sqrt_beta_mu * std::sqrt(std::sqrt(1.0 + c.gamma / (s.k * s.k)));
}

std::shared_ptr<const GridSamples> sample_grid(const DispersionCache& cache, PanelGrid grid) {
  auto out = std::make_shared<GridSamples>();
  out->grid = std::move(grid);
  out->coef.resize(out->grid.size());
  for (size_t i = 0; i < out->grid.size(); ++i) out->coef[i] = cache.at(out->grid.x(i));
  return out;
}

double phase_panel_width(const DispersionCache& cache, const SpectralParam& s) {
  const Bounds& b = cache.bounds();
  double ak = std::abs(s.k);
  double Mn = 1.0 / std::sqrt(b.m_ab);
  if (!s.reduced && ak > 0.0) Mn *= std::sqrt(1.0 + b.gamma_sup_measured / (ak * ak));
  if (ak * Mn == 0.0) return cache.hi() - cache.lo();
  return 2.0 * pi / (4.0 * ak * Mn);
}

AccumSeries propagate(std::shared_ptr<const GridSamples> samples, const SpectralParam& s, Direction dir,
                      size_t anchor_point, int N, double tol) {
  if (N < 0 || N > 64) raise(ErrorKind::Argument, "truncation order out of range");
  const PanelGrid& g = samples->grid;
  if (!g.is_break(anchor_point)) raise(ErrorKind::Coverage, "series anchor must be a panel break");
  const int p = g.order();
  const LegendrePanel& lp = legendre_panel(p);

  AccumSeries out;
  out.samples_ = samples;
  out.param_ = s;
  out.dir_ = dir;
  out.N_ = N;
  out.npts_ = g.size();
  out.anchor_ = anchor_point;
  out.first_ = dir == Direction::Forward ? anchor_point : 0;
  out.last_ = dir == Direction::Forward ? g.size() - 1 : anchor_point;
  out.phase_.assign(out.npts_, 0.0);
  out.jp_.assign(out.npts_ * (N + 1), 0.0);
  out.jm_.assign(out.npts_ * (N + 1), 0.0);
  out.ikn_.assign(out.npts_, 0.0);
  out.eta_.assign(out.npts_, 0.0);
  for (size_t i = out.first_; i <= out.last_; ++i) {
    LocalWave w = local_wave(samples->coef[i], s);
    out.ikn_[i] = w.ikn;
    out.eta_[i] = w.eta;
  }
  out.jp_[out.idx(0, anchor_point)] = 1.0;
  out.jm_[out.idx(0, anchor_point)] = 1.0;

  std::vector<cplx> dphi(p + 1), E(p + 1), v(p), acc(p + 1);
  const size_t anchor_break = anchor_point / static_cast<size_t>(p + 1);
  const size_t P = g.panels();
  double worst = 0.0;
  bool resolved = true;

  auto run_panel = [&](size_t panel) {
    const size_t ib = g.break_point(panel);
    const size_t ie = g.break_point(panel + 1);
    const double h2 = 0.5 * (g.breaks()[panel + 1] - g.breaks()[panel]);
    // Cumulative phase from the left break to each node (row p: right break).
    for (int i = 0; i <= p; ++i) {
      cplx acc_phi = 0.0;
      for (int j = 0; j < p; ++j) acc_phi += lp.S[i * p + j] * out.ikn_[ib + 1 + j];
      dphi[i] = h2 * acc_phi;
    }
    const bool fwd = dir == Direction::Forward;
    // Local exponent argument measured from the starting break.
    // Forward: phi(x) - phi(a). Backward: integral from x to b.
    std::vector<cplx> loc(p + 2);
    if (fwd) {
      for (int i = 0; i < p; ++i) loc[i] = dphi[i];
      loc[p] = dphi[p];
      for (int i = 0; i < p; ++i) out.phase_[ib + 1 + i] = out.phase_[ib] + dphi[i];
      out.phase_[ie] = out.phase_[ib] + dphi[p];
    } else {
      for (int i = 0; i < p; ++i) loc[i] = dphi[p] - dphi[i];
      loc[p] = dphi[p];  // left break
      for (int i = 0; i < p; ++i) out.phase_[ib + 1 + i] = out.phase_[ie] + loc[i];
      out.phase_[ib] = out.phase_[ie] + dphi[p];
    }
    std::vector<cplx> E2(p + 1);
    for (int i = 0; i <= p; ++i) E2[i] = std::exp(2.0 * loc[i]);

    for (int n = 0; n <= N; ++n) {
      for (int fam = 0; fam < 2; ++fam) {
        // fam 0: J+, fam 1: J-.
        bool two;
        if (fwd) {
          two = (fam == 0) ? (n % 2 == 0) : (n % 2 == 1);
        } else {
          two = (fam == 0);
        }
        std::vector<cplx>& J = fam == 0 ? out.jp_ : out.jm_;
        const std::vector<cplx>& src = fwd ? J : (fam == 0 ? out.jm_ : out.jp_);
        const size_t start = fwd ? ib : ie;
        const cplx J0 = J[out.idx(n, start)];
        if (n == 0) {
          for (int i = 0; i < p; ++i) J[out.idx(0, ib + 1 + i)] = two ? E2[i] * J0 : J0;
          J[out.idx(0, fwd ? ie : ib)] = two ? E2[p] * J0 : J0;
          continue;
        }
        double vmax = 0.0;
        for (int j = 0; j < p; ++j) {
          cplx gj = 0.5 * out.eta_[ib + 1 + j] * src[out.idx(n - 1, ib + 1 + j)];
          v[j] = two ? gj / E2[j] : gj;
          vmax = std::max(vmax, std::abs(v[j]));
        }
        for (int i = 0; i <= p; ++i) {
          cplx a = 0.0;
          for (int j = 0; j < p; ++j) a += lp.S[i * p + j] * v[j];
          acc[i] = h2 * a;
        }
        for (int i = 0; i < p; ++i) {
          cplx integral = fwd ? acc[i] : acc[p] - acc[i];
          J[out.idx(n, ib + 1 + i)] = (two ? E2[i] : 1.0) * (J0 + integral);
        }
        J[out.idx(n, fwd ? ie : ib)] = (two ? E2[p] : 1.0) * (J0 + acc[p]);
        double tail = legendre_tail(lp, v.data());
        double ratio = h2 * tail / (tol * vmax * h2 + kTailAbs);
        worst = std::max(worst, ratio);
        if (ratio > 1.0) resolved = false;
      }
    }
  };

  if (dir == Direction::Forward) {
    for (size_t panel = anchor_break; panel < P; ++panel) run_panel(panel);
  } else {
    for (size_t panel = anchor_break; panel-- > 0;) run_panel(panel);
  }
  out.resolved_ = resolved;
  out.worst_tail_ = worst;
  return out;
}

AccumSeries::Point AccumSeries::at_point(size_t i) const {
  if (!covers(i)) raise(ErrorKind::Coverage, "series does not cover the requested point");
  Point pt;
  pt.x = samples_->grid.x(i);
  pt.phase = phase_[i];
  pt.jp.resize(N_ + 1);
  pt.jm.resize(N_ + 1);
  for (int n = 0; n <= N_; ++n) {
    pt.jp[n] = jp(n, i);
    pt.jm[n] = jm(n, i);
  }
  return pt;
}

AccumSeries::Point AccumSeries::at(double x) const {
  const PanelGrid& g = samples_->grid;
  if (auto ip = g.find_point(x)) return at_point(*ip);
  double span = g.hi() - g.lo();
  double xa = g.x(first_), xb = g.x(last_);
  if (x < xa - 1e-13 * span || x > xb + 1e-13 * span)
    raise(ErrorKind::Coverage, "series does not cover x = " + std::to_string(x));
  const int p = g.order();
  const LegendrePanel& lp = legendre_panel(p);
  const size_t panel = g.panel_of(x);
  const size_t ib = g.break_point(panel), ie = g.break_point(panel + 1);
  const double a = g.breaks()[panel], b = g.breaks()[panel + 1];
  const double h2 = 0.5 * (b - a);
  const double tau = std::clamp((2.0 * x - a - b) / (b - a), -1.0, 1.0);
  auto row = lp.integral_row(tau);
  const bool fwd = dir_ == Direction::Forward;

  cplx ix = 0.0;
  for (int j = 0; j < p; ++j) ix += row[j] * ikn_[ib + 1 + j];
  ix *= h2;  // integral from a to x
  Point pt;
  pt.x = x;
  pt.jp.assign(N_ + 1, 0.0);
  pt.jm.assign(N_ + 1, 0.0);
  // loc(x): forward phi(x)-phi(a); backward integral x..b.
  cplx full = phase_[fwd ? ie : ib] - phase_[fwd ? ib : ie];
  cplx locx = fwd ? ix : full - ix;
  pt.phase = fwd ? phase_[ib] + locx : phase_[ie] + locx;
  cplx E2x = std::exp(2.0 * locx);
  std::vector<cplx> v(p);
  for (int n = 0; n <= N_; ++n) {
    for (int fam = 0; fam < 2; ++fam) {
      bool two = fwd ? ((fam == 0) ? (n % 2 == 0) : (n % 2 == 1)) : (fam == 0);
      const std::vector<cplx>& J = fam == 0 ? jp_ : jm_;
      const std::vector<cplx>& src = fwd ? J : (fam == 0 ? jm_ : jp_);
      const cplx J0 = J[idx(n, fwd ? ib : ie)];
      cplx integral = 0.0;
      if (n > 0) {
        cplx tot = 0.0;
        for (int j = 0; j < p; ++j) {
          size_t node = ib + 1 + j;
          cplx locj = fwd ? phase_[node] - phase_[ib] : phase_[node] - phase_[ie];
          cplx gj = 0.5 * eta_[node] * src[idx(n - 1, node)];
          v[j] = two ? gj * std::exp(-2.0 * locj) : gj;
        }
        cplx part = 0.0;
        for (int j = 0; j < p; ++j) {
          part += row[j] * v[j];
          tot += lp.w[j] * v[j];
        }
        part *= h2;
        tot *= h2;
        integral = fwd ? part : tot - part;
      }
      cplx val = (two ? E2x : 1.0) * (J0 + integral);
      (fam == 0 ? pt.jp : pt.jm)[n] = val;
    }
  }
  return pt;
}

AccumSeries propagate_on(const DispersionCache& cache, const SpectralParam& s, double a, double b,
                         const std::vector<double>& points, Direction dir, int N) {
  if (!(b > a)) raise(ErrorKind::Argument, "propagation interval is empty");
  std::vector<double> extra;
  for (double x : points) {
    if (x < a - 1e-12 * (b - a) || x > b + 1e-12 * (b - a))
      raise(ErrorKind::Coverage, "grid point outside the propagation interval");
    extra.push_back(std::clamp(x, a, b));
  }
  std::vector<double> base = merge_breaks(clip_breaks(cache.breaks(), a, b), extra);
  double width = std::min(phase_panel_width(cache, s), b - a);
  for (int level = 0; level < kMaxLevels; ++level) {
    auto samples = sample_grid(cache, PanelGrid(subdivide(base, width), kCollocationOrder));
    size_t anchor = dir == Direction::Forward ? 0 : samples->grid.size() - 1;
    AccumSeries series = propagate(samples, s, dir, anchor, N);
    if (series.resolved()) return series;
    width *= 0.5;
  }
  raise(ErrorKind::Stiffness, "propagation unresolved at k = (" + std::to_string(s.k.real()) + ", " +
                                  std::to_string(s.k.imag()) + ")");
}

AccumSeries accum_cs_forward(const SpectralParam& s, double a, const std::vector<double>& grid, int N,
                             const DispersionCache& cache) {
  double b = cache.hi();
  for (double x : grid) b = std::max(b, x);
  AccumSeries out = propagate_on(cache, s, a, std::min(b, cache.hi()), grid, Direction::Forward, N);
  out.set_family(Family::CS);
  return out;
}

AccumSeries accum_cs_backward(const SpectralParam& s, double b, const std::vector<double>& grid, int N,
                              const DispersionCache& cache) {
  AccumSeries out = propagate_on(cache, s, cache.lo(), b, grid, Direction::Backward, N);
  out.set_family(Family::CS);
  return out;
}

AccumSeries accum_e_tail(const SpectralParam& s, const std::vector<double>& grid, int N,
                         const DispersionCache& cache) {
  if (cache.domain().kind == DomainKind::FiniteInterval)
    raise(ErrorKind::Argument, "tail series need an unbounded domain");
  AccumSeries out = propagate_on(cache, s, cache.lo(), cache.hi(), grid, Direction::Backward, N);
  out.set_family(Family::E);
  return out;
}

AccumSeries accum_e_tilde_tail(const SpectralParam& s, const std::vector<double>& grid, int N,
                               const DispersionCache& cache) {
  if (cache.domain().kind != DomainKind::WholeLine)
    raise(ErrorKind::Argument, "tilde tail series need the whole line");
  AccumSeries out = propagate_on(cache, s, cache.lo(), cache.hi(), grid, Direction::Forward, N);
  out.set_family(Family::Etilde);
  return out;
}

ScriptCS script_cs(const AccumSeries& series, size_t i) {
  ScriptCS out;
  for (int n = 0; n <= series.N(); ++n) {
    out.C.push_back(series.script_c(n, i));
    out.S.push_back(series.script_s(n, i));
  }
  return out;
}

}  // namespace utm
