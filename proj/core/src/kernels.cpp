#include "utm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "utm/errors.hpp"

namespace utm {

namespace {

// exp(-46) ~ 1e-20: contributions below this relative size are skipped.
constexpr double kNegligible = -46.0;

}  // namespace

DataCheck check_data(const ProblemData& data, const DispersionCache& cache, double T) {
  DataCheck out;
  const double a = cache.lo(), b = cache.hi();
  const int nx = 4000, nt = 64;
  const double hx = (b - a) / nx;
  auto finite = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  if (data.q0) {
    for (int i = 0; i < nx; ++i) {
      cplx v = data.q0(a + (i + 0.5) * hx);
      if (!finite(v)) {
        out.ok = false;
        out.message = "q0 is not finite";
        return out;
      }
      out.q0_l1 += std::abs(v) * hx;
    }
  }
  if (data.f) {
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= nt; ++j) {
        double x = a + (b - a) * i / 200.0, t = T * j / nt;
        cplx v = data.f(x, t);
        if (!finite(v)) {
          out.ok = false;
          out.message = "f is not finite";
          return out;
        }
        out.f_sup = std::max(out.f_sup, std::abs(v));
        if (j > 0) out.ft_sup = std::max(out.ft_sup, std::abs(v - data.f(x, T * (j - 1) / nt)) * nt / T);
      }
  }
  auto lip = [&](const std::function<cplx(double)>& g) {
    double L = 0.0;
    cplx prev = g(0.0);
    for (int j = 1; j <= 1024; ++j) {
      cplx v = g(T * j / 1024.0);
      if (!finite(v)) return std::numeric_limits<double>::infinity();
      L = std::max(L, std::abs(v - prev) * 1024.0 / T);
      prev = v;
    }
    return L;
  };
  if (data.f0) out.f0_lip = lip(data.f0);
  if (data.f1) out.f1_lip = lip(data.f1);
  if (!std::isfinite(out.f0_lip) || !std::isfinite(out.f1_lip)) {
    out.ok = false;
    out.message = "boundary data is not finite";
  }
  return out;
}

KernelContext::KernelContext(const DispersionCache& cache, const BoundaryConditions& bc, const SpectralParam& s,
                             std::shared_ptr<const GridSamples> samples, int N)
    : cache_(&cache), bc_(bc), s_(s), samples_(std::move(samples)), N_(N) {
  const size_t last = samples_->grid.size() - 1;
  fwd_ = propagate(samples_, s_, Direction::Forward, 0, N_);
  bwd_ = propagate(samples_, s_, Direction::Backward, last, N_);
  if (bc_.kind == DomainKind::WholeLine) {
    fwd_.set_family(Family::Etilde);
    bwd_.set_family(Family::E);
  } else if (bc_.kind == DomainKind::HalfLine) {
    bwd_.set_family(Family::E);
  }
  ends_ = endpoint_data(cache, s_);
  xi_ = std::exp(fwd_.phase(last));
  sbn_.resize(samples_->grid.size());
  for (size_t i = 0; i < sbn_.size(); ++i) sbn_[i] = sqrt_beta_n(samples_->coef[i], s_);
  switch (bc_.kind) {
    case DomainKind::FiniteInterval: delta_ = delta_fi(bc_, fwd_, cache); break;
    case DomainKind::HalfLine: delta_ = delta_hl(bc_, bwd_, cache); break;
    case DomainKind::WholeLine: delta_ = delta_wl(fwd_, bwd_, 0); break;
  }
  build_vectors();
}

KernelContext KernelContext::build(const DispersionCache& cache, const BoundaryConditions& bc,
                                   const SpectralParam& s, const std::vector<double>& points, int N) {
  const double a = cache.lo(), b = cache.hi();
  std::vector<double> extra;
  for (double x : points) {
    if (x < a - 1e-12 * (b - a) || x > b + 1e-12 * (b - a)) raise(ErrorKind::Coverage, "point outside the domain");
    extra.push_back(std::clamp(x, a, b));
  }
  std::vector<double> base = merge_breaks(cache.breaks(), extra);
  double width = std::min(phase_panel_width(cache, s), b - a);
  for (int level = 0; level < 12; ++level) {
    auto samples = sample_grid(cache, PanelGrid(subdivide(base, width), kCollocationOrder));
    KernelContext ctx(cache, bc, s, samples, N);
    if (ctx.resolved()) return ctx;
    width *= 0.5;
  }
  raise(ErrorKind::Stiffness, "kernel series unresolved");
}

size_t KernelContext::point(double x) const {
  auto ip = grid().find_point(x);
  if (!ip) raise(ErrorKind::Coverage, "x = " + std::to_string(x) + " is not a grid point of the kernel context");
  return *ip;
}

void KernelContext::build_vectors() {
  const size_t npts = grid().size();
  const int N = N_;
  if (bc_.kind == DomainKind::FiniteInterval) {
    m_ = 2 * static_cast<size_t>(N + 1);
    pref_ = 4.0;
    const cplx m24 = bc_.minor(2, 4), m23 = bc_.minor(2, 3), m13 = bc_.minor(1, 3), m14 = bc_.minor(1, 4);
    const cplx m12 = bc_.minor(1, 2), m34 = bc_.minor(3, 4);
    const cplx den = ends_.kk * ends_.sbn_l * ends_.sbn_r;
    wrap12_ = -4.0 * ends_.beta_r * m12 / den;
    wrap34_ = -4.0 * ends_.beta_l * m34 / den;
    L_.assign(npts * m_, 0.0);
    R_.assign(npts * m_, 0.0);
    std::vector<cplx> P(N + 1), Q(N + 1);
    for (size_t i = 0; i < npts; ++i) {
      for (int n = 0; n <= N; ++n) {
        L_[i * m_ + n] = fwd_.script_c(n, i);
        L_[i * m_ + N + 1 + n] = fwd_.script_s(n, i);
      }
      // P_j = sum_{l <= N-j} (-1)^l Bc_l, Q_j = sum_{l <= N-j} Bs_l.
      cplx ps = 0.0, qs = 0.0;
      for (int l = 0; l <= N; ++l) {
        ps += ((l % 2 == 0) ? 1.0 : -1.0) * bwd_.script_c(l, i);
        qs += bwd_.script_s(l, i);
        P[N - l] = ps;
        Q[N - l] = qs;
      }
      for (int n = 0; n <= N; ++n) {
        R_[i * m_ + n] = -m24 * P[n] - m23 / ends_.kn_r * Q[n];
        R_[i * m_ + N + 1 + n] = m13 / (ends_.kn_l * ends_.kn_r) * Q[n] + m14 / ends_.kn_l * P[n];
      }
    }
    return;
  }
  m_ = static_cast<size_t>(N + 1);
  pref_ = bc_.kind == DomainKind::HalfLine ? 4.0 : 1.0;
  L_.assign(npts * m_, 0.0);
  R_.assign(npts * m_, 0.0);
  std::vector<cplx> P(N + 1);
  for (size_t i = 0; i < npts; ++i) {
    for (int n = 0; n <= N; ++n) {
      if (bc_.kind == DomainKind::HalfLine)
        L_[i * m_ + n] = bc_.a0 / ends_.kn_l * fwd_.script_s(n, i) - bc_.a1 * fwd_.script_c(n, i);
      else
        L_[i * m_ + n] = fwd_.etilde(n, i);
    }
    cplx ps = 0.0;
    for (int l = 0; l <= N; ++l) {
      ps += ((l % 2 == 0) ? 1.0 : -1.0) * bwd_.e(l, i);
      P[N - l] = ps;
    }
    for (int n = 0; n <= N; ++n) R_[i * m_ + n] = P[n];
  }
}

cplx KernelContext::main_term(size_t lo_pt, size_t hi_pt) const {
  cplx d = fwd_.phase(hi_pt) - fwd_.phase(lo_pt);
  if (d.real() < kNegligible) return 0.0;
  const cplx* l = &L_[lo_pt * m_];
  const cplx* r = &R_[hi_pt * m_];
  cplx acc = 0.0;
  for (size_t j = 0; j < m_; ++j) acc += l[j] * r[j];
  return pref_ * std::exp(d) * acc;
}

bool KernelContext::wrap_needed_lower(size_t ix) const {
  return bc_.kind == DomainKind::FiniteInterval && wrap12_ != 0.0 && bwd_.phase(ix).real() > kNegligible;
}

bool KernelContext::wrap_needed_upper(size_t ix) const {
  return bc_.kind == DomainKind::FiniteInterval && wrap34_ != 0.0 && fwd_.phase(ix).real() > kNegligible;
}

// y below x: series W anchored at x, running backward.
cplx KernelContext::wrap_lower(size_t ix, size_t iy, const AccumSeries* w) const {
  cplx e = fwd_.phase(iy) + bwd_.phase(ix);
  if (e.real() < kNegligible) return 0.0;
  cplx s = 0.0;
  for (int n = 0; n <= N_; ++n) s += w->script_s(n, iy);
  return wrap12_ * std::exp(e) * s;
}

// y above x: series W anchored at x, running forward.
cplx KernelContext::wrap_upper(size_t ix, size_t iy, const AccumSeries* w) const {
  cplx e = fwd_.phase(ix) + bwd_.phase(iy);
  if (e.real() < kNegligible) return 0.0;
  cplx s = 0.0;
  for (int n = 0; n <= N_; ++n) s += w->script_s(n, iy);
  return wrap34_ * std::exp(e) * s;
}

cplx KernelContext::psi_points(size_t ix, size_t iy) const {
  if (iy <= ix) {
    cplx v = main_term(iy, ix);
    if (iy < ix && wrap_needed_lower(ix)) {
      if (!grid().is_break(ix)) raise(ErrorKind::Coverage, "x must be a panel break for this boundary matrix");
      AccumSeries w = propagate(samples_, s_, Direction::Backward, ix, N_);
      v += wrap_lower(ix, iy, &w);
    }
    return v;
  }
  cplx v = main_term(ix, iy);
  if (wrap_needed_upper(ix)) {
    if (!grid().is_break(ix)) raise(ErrorKind::Coverage, "x must be a panel break for this boundary matrix");
    AccumSeries w = propagate(samples_, s_, Direction::Forward, ix, N_);
    v += wrap_upper(ix, iy, &w);
  }
  return v;
}

cplx KernelContext::boundary_kernel_point(int m, size_t ix) const {
  if (m != 0 && m != 1) raise(ErrorKind::Argument, "boundary kernel index must be 0 or 1");
  switch (bc_.kind) {
    case DomainKind::WholeLine: return 0.0;
    case DomainKind::HalfLine: {
      if (m == 1) raise(ErrorKind::Argument, "the half line has a single boundary kernel");
      cplx s = 0.0;
      for (int n = 0; n <= N_; ++n) s += ((n % 2 == 0) ? 1.0 : -1.0) * bwd_.e(n, ix);
      return 4.0 * ends_.beta_l * std::exp(fwd_.phase(ix)) / (ends_.sbn_l * sbn_[ix]) * s;
    }
    case DomainKind::FiniteInterval: break;
  }
  const int j = 2 - m;
  const auto& row = bc_.rows[j - 1];
  cplx SF = 0.0, CF = 0.0, SB = 0.0, CB = 0.0;
  for (int n = 0; n <= N_; ++n) {
    SF += fwd_.script_s(n, ix);
    CF += fwd_.script_c(n, ix);
    SB += bwd_.script_s(n, ix);
    CB += ((n % 2 == 0) ? 1.0 : -1.0) * bwd_.script_c(n, ix);
  }
  cplx left = ends_.beta_r / ends_.sbn_r * std::exp(bwd_.phase(ix)) * (-row[0] / ends_.kn_l * SF + row[1] * CF);
  cplx right = ends_.beta_l / ends_.sbn_l * std::exp(fwd_.phase(ix)) * (row[2] / ends_.kn_r * SB + row[3] * CB);
  double sg = (j % 2 == 0) ? 1.0 : -1.0;
  return sg * 4.0 / sbn_[ix] * (left + right);
}

void KernelContext::transform(size_t ix, const std::vector<cplx>& g, size_t ncols, cplx* out) const {
  transform_all({ix}, g, ncols, out);
}

void KernelContext::transform_all(const std::vector<size_t>& xs, const std::vector<cplx>& g, size_t ncols,
                                  cplx* out) const {
  const PanelGrid& gr = grid();
  const size_t npts = gr.size();
  const size_t nx = xs.size();
  const size_t mc = m_ * ncols;
  for (size_t i = 0; i < nx * ncols; ++i) out[i] = 0.0;
  if (ncols == 0 || nx == 0) return;

  // Psi(x, y) = pref exp(phi(max) - phi(min)) L(min) . R(max) + wrap terms, so
  // the y-integral splits into running sums from the left (of L) and from the
  // right (of R), each carried along the grid with decaying step factors.
  std::vector<size_t> order(nx);
  for (size_t i = 0; i < nx; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });

  std::vector<cplx> acc(mc, 0.0), left(nx * mc, 0.0), right(nx * mc, 0.0);
  auto deposit = [&](size_t iy, const std::vector<cplx>& V) {
    const double w = gr.weight(iy);
    if (w == 0.0) return;
    const cplx sw = w / sbn_[iy];
    const cplx* v = &V[iy * m_];
    for (size_t c = 0; c < ncols; ++c) {
      const cplx gc = g[c * npts + iy] * sw;
      if (gc == 0.0) continue;
      cplx* a = &acc[c * m_];
      for (size_t j = 0; j < m_; ++j) a[j] += gc * v[j];
    }
  };
  auto decay = [&](cplx d) {
    const cplx e = d.real() < kNegligible ? cplx(0.0) : std::exp(d);
    for (auto& a : acc) a *= e;
  };
  // Left sweep: sum over y <= x of exp(phi(x) - phi(y)) L(y) (...).
  {
    size_t next = 0;
    for (size_t iy = 0; iy < npts && next < nx; ++iy) {
      if (iy > 0) decay(fwd_.phase(iy) - fwd_.phase(iy - 1));
      deposit(iy, L_);
      while (next < nx && xs[order[next]] == iy) {
        std::copy(acc.begin(), acc.end(), left.begin() + order[next] * mc);
        ++next;
      }
    }
  }
  // Right sweep: sum over y > x of exp(phi(y) - phi(x)) R(y) (...).
  std::fill(acc.begin(), acc.end(), 0.0);
  {
    size_t next = nx;
    for (size_t iy = npts; iy-- > 0 && next > 0;) {
      if (iy + 1 < npts) decay(fwd_.phase(iy + 1) - fwd_.phase(iy));
      while (next > 0 && xs[order[next - 1]] == iy) {
        std::copy(acc.begin(), acc.end(), right.begin() + order[next - 1] * mc);
        --next;
      }
      deposit(iy, R_);
    }
  }
  for (size_t i = 0; i < nx; ++i) {
    const size_t ix = xs[i];
    const cplx* lr = &left[i * mc];
    const cplx* rr = &right[i * mc];
    const cplx* Lx = &L_[ix * m_];
    const cplx* Rx = &R_[ix * m_];
    for (size_t c = 0; c < ncols; ++c) {
      cplx v = 0.0;
      for (size_t j = 0; j < m_; ++j) v += Rx[j] * lr[c * m_ + j] + Lx[j] * rr[c * m_ + j];
      out[i * ncols + c] = pref_ * v;
    }
    // Wrap terms of the finite interval.
    std::optional<AccumSeries> wl, wu;
    if (ix > 0 && wrap_needed_lower(ix)) {
      if (!gr.is_break(ix)) raise(ErrorKind::Coverage, "x must be a panel break for this boundary matrix");
      wl = propagate(samples_, s_, Direction::Backward, ix, N_);
    }
    if (ix + 1 < npts && wrap_needed_upper(ix)) {
      if (!gr.is_break(ix)) raise(ErrorKind::Coverage, "x must be a panel break for this boundary matrix");
      wu = propagate(samples_, s_, Direction::Forward, ix, N_);
    }
    auto add = [&](size_t iy, cplx v) {
      if (v == 0.0 || gr.weight(iy) == 0.0) return;
      v *= gr.weight(iy) / sbn_[iy];
      for (size_t c = 0; c < ncols; ++c) out[i * ncols + c] += v * g[c * npts + iy];
    };
    if (wl)
      for (size_t iy = 0; iy < ix; ++iy) add(iy, wrap_lower(ix, iy, &*wl));
    if (wu)
      for (size_t iy = ix + 1; iy < npts; ++iy) add(iy, wrap_upper(ix, iy, &*wu));
    const cplx inv = 1.0 / sbn_[ix];
    for (size_t c = 0; c < ncols; ++c) out[i * ncols + c] *= inv;
  }
}

cplx psi(const KernelContext& ctx, double x, double y) { return ctx.psi(x, y); }

cplx boundary_kernel(const KernelContext& ctx, int m, double x) {
  return ctx.boundary_kernel_point(m, ctx.point(x));
}

cplx phi0(const KernelContext& ctx, double x, const ProblemData& data) {
  if (!data.q0) return 0.0;
  const size_t ix = ctx.point(x);
  const auto& smp = ctx.samples();
  std::vector<cplx> g(smp.grid.size(), 0.0);
  for (size_t i = 0; i < g.size(); ++i)
    if (smp.grid.weight(i) != 0.0) g[i] = data.q0(smp.grid.x(i)) / smp.coef[i].alpha;
  cplx out;
  ctx.transform(ix, g, 1, &out);
  return out;
}

ForcingSeries forcing_series(const ProblemData& data, const GridSamples& samples, double T) {
  ForcingSeries fs;
  fs.T = T;
  const size_t n = samples.grid.size();
  fs.d1.resize(n);
  fs.d2.resize(n);
  fs.v0.assign(n, 0.0);
  fs.d0.assign(n, 0.0);
  if (!data.f) return fs;
  fs.present = true;
  for (size_t i = 0; i < n; ++i) {
    if (samples.grid.weight(i) == 0.0) continue;
    const double y = samples.grid.x(i);
    const cplx a = samples.coef[i].alpha;
    fs.v0[i] = data.f(y, 0.0) / a;
    if (data.f_t) {
      fs.d1[i] = cheb_fit([&](double s) { return data.f_t(y, s) / a; }, T);
    } else {
      ChebSeries g = cheb_fit([&](double s) { return data.f(y, s) / a; }, T);
      fs.d1[i] = cheb_derivative(g);
    }
    fs.d2[i] = cheb_derivative(fs.d1[i]);
    fs.d0[i] = fs.d1[i](0.0);
  }
  return fs;
}

std::vector<cplx> forcing_transform(const ForcingSeries& fs, cplx k2, double t, int depth) {
  const size_t n = fs.v0.size();
  std::vector<cplx> out(n, 0.0);
  if (!fs.present) return out;
  int deg = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& c = depth <= 1 ? fs.d1[i] : fs.d2[i];
    deg = std::max(deg, c.degree());
  }
  auto M = decay_moments(k2, t, deg, fs.T);
  const cplx E = std::exp(-k2 * t), k4 = k2 * k2;
  for (size_t i = 0; i < n; ++i) {
    const auto& c = depth <= 1 ? fs.d1[i] : fs.d2[i];
    if (c.c.empty()) continue;
    cplx m = 0.0;
    for (int j = 0; j <= c.degree(); ++j) m += c.c[j] * M[j];
    if (depth <= 1)
      out[i] = -fs.v0[i] * E / k2 - m / k2;
    else
      out[i] = -fs.v0[i] * E / k2 + fs.d0[i] * E / k4 + m / k4;
  }
  return out;
}

cplx phi_f_deformed(const KernelContext& ctx, double x, double t, const ProblemData& data, int depth) {
  if (!data.f) return 0.0;
  if (!(t > 0.0)) raise(ErrorKind::Argument, "phi_f requires t > 0");
  ForcingSeries fs = forcing_series(data, ctx.samples(), t);
  const cplx k = ctx.k();
  std::vector<cplx> g = forcing_transform(fs, k * k, t, depth);
  cplx out;
  ctx.transform(ctx.point(x), g, 1, &out);
  return out;
}

}  // namespace utm
