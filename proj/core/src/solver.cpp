#include "utm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "utm/errors.hpp"
#include "utm/parallel.hpp"
#include "utm/quadrature.hpp"

namespace utm {

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> v(n);
  if (n == 0) return v;
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

int select_truncation(const DispersionCache& cache, const BoundaryConditions& bc, const ContourSpec& contour) {
  const double r = contour.r, th = contour.theta0;
  const cplx probes[] = {std::polar(r, 0.5 * pi), std::polar(r, th), std::polar(r, pi - th)};
  int N = 0;
  for (cplx k : probes) {
    KernelContext ctx = KernelContext::build(cache, bc, SpectralParam::general(k), {}, kMaxTruncation);
    auto S = delta_partial_sums(bc, ctx.forward(), ctx.backward(), cache);
    const cplx ref = S.back();
    int M = kMaxTruncation;
    for (int m = 0; m <= kMaxTruncation; ++m) {
      if (std::abs(S[m] - ref) <= 1e-11 * std::abs(ref)) {
        M = m;
        break;
      }
    }
    N = std::max(N, M);
  }
  return N;
}

namespace {

// Splits base panels until g is resolved by 16-point Legendre data.
std::vector<double> resolve_for(const std::vector<double>& base, const std::function<cplx(double)>& g,
                                bool& capped) {
  const LegendrePanel& lp = legendre_panel(kCollocationOrder);
  const double span = base.back() - base.front();
  double scale = 0.0;
  std::vector<std::pair<double, double>> todo;
  for (size_t i = 0; i + 1 < base.size(); ++i) todo.emplace_back(base[i], base[i + 1]);
  for (auto [a, b] : todo)
    for (int j = 0; j < kCollocationOrder; ++j)
      scale = std::max(scale, std::abs(g(0.5 * (a + b) + 0.5 * (b - a) * lp.t[j])));
  if (scale == 0.0) return base;
  std::vector<double> out{base.front()};
  std::vector<cplx> v(kCollocationOrder);
  while (!todo.empty()) {
    auto [a, b] = todo.front();
    todo.erase(todo.begin());
    for (int j = 0; j < kCollocationOrder; ++j) v[j] = g(0.5 * (a + b) + 0.5 * (b - a) * lp.t[j]);
    double tail = legendre_tail(lp, v.data());
    if (tail > 1e-13 * scale && (b - a) > 1e-6 * span) {
      double m = 0.5 * (a + b);
      todo.insert(todo.begin(), {{a, m}, {m, b}});
      continue;
    }
    if (tail > 1e-13 * scale) capped = true;
    out.push_back(b);
  }
  return out;
}

struct Level {
  std::shared_ptr<const GridSamples> samples;
  std::vector<size_t> xi;
  std::vector<cplx> gq;
  ForcingSeries forcing;
};

class LevelCache {
 public:
  LevelCache(const DispersionCache& cache, std::vector<double> base, const std::vector<double>& x,
             const ProblemData& data, double T)
      : cache_(cache), base_(std::move(base)), x_(x), data_(data), T_(T) {
    w0_ = 0.0;
    for (size_t i = 0; i + 1 < base_.size(); ++i) w0_ = std::max(w0_, base_[i + 1] - base_[i]);
  }
  double w0() const { return w0_; }

  std::shared_ptr<const Level> get(int j) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = levels_.find(j);
      if (it != levels_.end()) return it->second;
    }
    auto lv = std::make_shared<Level>();
    lv->samples = sample_grid(cache_, PanelGrid(subdivide(base_, w0_ / std::ldexp(1.0, j)), kCollocationOrder));
    const PanelGrid& g = lv->samples->grid;
    for (double x : x_) {
      auto b = g.find_point(x);
      if (!b || !g.is_break(*b)) raise(ErrorKind::Coverage, "output point is not a grid break");
      lv->xi.push_back(*b);
    }
    lv->gq.assign(g.size(), 0.0);
    if (data_.q0)
      for (size_t i = 0; i < g.size(); ++i)
        if (g.weight(i) != 0.0) lv->gq[i] = data_.q0(g.x(i)) / lv->samples->coef[i].alpha;
    lv->forcing = forcing_series(data_, *lv->samples, T_);
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = levels_.emplace(j, lv);
    return it->second;
  }

 private:
  const DispersionCache& cache_;
  std::vector<double> base_;
  std::vector<double> x_;
  const ProblemData& data_;
  double T_;
  double w0_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<const Level>> levels_;
};

}  // namespace

SolutionField solve_q(const DispersionCache& cache, const BoundaryConditions& bc, const ProblemData& data,
                      const std::vector<double>& x, const std::vector<double>& t, const SolveOptions& opt) {
  if (bc.kind != cache.domain().kind) raise(ErrorKind::Argument, "boundary conditions do not match the domain");
  SolutionField out;
  out.x = x;
  out.t = t;
  const size_t nx = x.size(), nt = t.size();
  out.q.assign(nx * nt, 0.0);
  out.q0 = out.qf = out.qb0 = out.qb1 = out.q;
  if (nx == 0 || nt == 0) return out;

  const double lo = cache.lo(), hi = cache.hi(), span = hi - lo;
  for (double xv : x)
    if (!(xv >= lo - 1e-12 * span && xv <= hi + 1e-12 * span))
      raise(ErrorKind::Argument, "output x = " + std::to_string(xv) + " lies outside the domain");
  double tmin = t[0], tmax = t[0];
  for (double tv : t) {
    if (!(tv >= opt.t_min) || !(tv > 0.0))
      raise(ErrorKind::Argument, "t = " + std::to_string(tv) + " is below t_min = " + std::to_string(opt.t_min));
    tmin = std::min(tmin, tv);
    tmax = std::max(tmax, tv);
  }

  if (bc.kind == DomainKind::FiniteInterval) {
    BoundaryCase bcase = classify(bc, cache);
    out.diag.boundary_case = to_string(bcase.id);
    out.diag.regular = bcase.regular;
    if (bcase.id == CaseId::Unsupported) raise(ErrorKind::Case, "unsupported boundary case: " + bcase.note);
    if (!bcase.note.empty()) out.diag.warnings.push_back(bcase.note);
    if (!bcase.regular) {
      for (double xv : x)
        if (xv - lo < opt.delta_min || hi - xv < opt.delta_min)
          raise(ErrorKind::Argument, "irregular problem: x = " + std::to_string(xv) + " is within " +
                                         std::to_string(opt.delta_min) + " of the boundary");
      out.diag.warnings.push_back("irregular boundary case; boundary traces not evaluated");
    }
  }

  ContourOptions co;
  co.safety = opt.safety;
  co.theta0 = opt.theta0;
  co.radius = opt.radius;
  co.t_max = tmax;
  co.refine = opt.contour_refine;
  co.max_nodes = opt.max_nodes;
  ContourSpec contour = build_contour(cache, tmin, opt.tol, co);
  out.diag.nodes = contour.size();
  out.diag.r = contour.r;
  out.diag.theta0 = contour.theta0;
  out.diag.K_max = contour.K_max;
  const int N = opt.N >= 0 ? std::min(opt.N, 32) : select_truncation(cache, bc, contour);
  out.diag.N = N;

  // Base breaks: coefficient breaks, output points, data breaks, data resolution.
  std::vector<double> xs;
  for (double xv : x) xs.push_back(std::clamp(xv, lo, hi));
  std::vector<double> base = merge_breaks(cache.breaks(), xs);
  if (!data.breaks.empty()) {
    std::vector<double> db;
    for (double b : data.breaks)
      if (b > lo && b < hi) db.push_back(b);
    base = merge_breaks(base, db);
  }
  bool capped = false;
  if (data.q0) base = resolve_for(base, data.q0, capped);
  if (data.f) base = resolve_for(base, [&](double y) { return data.f(y, 0.5 * tmax); }, capped);
  if (capped) out.diag.warnings.push_back("initial or forcing data not resolved by the y-grid");

  LevelCache levels(cache, base, xs, data, tmax);
  const int depth = std::max(1, std::min(2, opt.ibp_depth));
  std::optional<ChebSeries> fb[2];
  if (data.f0) fb[0] = cheb_fit(data.f0, tmax);
  if (data.f1) fb[1] = cheb_fit(data.f1, tmax);
  const bool fi = bc.kind == DomainKind::FiniteInterval;
  const bool hl = bc.kind == DomainKind::HalfLine;

  const size_t nn = contour.size();
  const size_t stride = 4 * nx * nt;
  std::vector<cplx> contrib(nn * stride, 0.0);
  std::vector<int> used_level(nn, 0);

  parallel_for(
      nn,
      [&](size_t i) {
        const cplx k = contour.nodes[i], k2 = k * k;
        const SpectralParam s = SpectralParam::general(k);
        double w = phase_panel_width(cache, s) * opt.grid_refine;
        int j = std::max(0, static_cast<int>(std::ceil(std::log2(levels.w0() / w) - 1e-9)));
        std::shared_ptr<const Level> lv;
        std::optional<KernelContext> ctx;
        for (int tries = 0; tries < 6; ++tries, ++j) {
          lv = levels.get(j);
          ctx.emplace(cache, bc, s, lv->samples, N);
          if (ctx->resolved()) break;
          if (tries == 5) raise(ErrorKind::Stiffness, "series unresolved on the contour");
        }
        used_level[i] = j;
        const cplx D = ctx->delta();
        if (!(std::abs(D) > 0.0) || !std::isfinite(std::abs(D)))
          raise(ErrorKind::Evaluation, "characteristic function vanishes on the contour");
        const cplx scale = contour.weights[i] / (2.0 * pi * D);

        const size_t npts = lv->samples->grid.size();
        const bool q0on = static_cast<bool>(data.q0), fon = lv->forcing.present;
        const size_t ncols = (q0on ? 1 : 0) + (fon ? nt : 0);
        std::vector<cplx> g;
        if (ncols > 0) {
          g.resize(ncols * npts);
          size_t col = 0;
          if (q0on) std::copy(lv->gq.begin(), lv->gq.end(), g.begin() + (col++) * npts);
          if (fon)
            for (size_t it = 0; it < nt; ++it) {
              auto ft = forcing_transform(lv->forcing, k2, t[it], depth);
              std::copy(ft.begin(), ft.end(), g.begin() + (col++) * npts);
            }
        }
        std::vector<cplx> E(nt), F[2];
        for (size_t it = 0; it < nt; ++it) E[it] = std::exp(-k2 * t[it]);
        for (int m = 0; m < 2; ++m) {
          if (!fb[m]) continue;
          F[m].resize(nt);
          for (size_t it = 0; it < nt; ++it) F[m][it] = fm_frak_decayed(k2, t[it], *fb[m], depth);
        }
        std::vector<cplx> trs(nx * ncols);
        if (ncols > 0) ctx->transform_all(lv->xi, g, ncols, trs.data());
        cplx* c = &contrib[i * stride];
        for (size_t ix = 0; ix < nx; ++ix) {
          const size_t p = lv->xi[ix];
          const cplx* tr = &trs[ix * ncols];
          cplx B[2] = {0.0, 0.0};
          if ((fi || hl) && fb[0]) B[0] = ctx->boundary_kernel_point(0, p);
          if (fi && fb[1]) B[1] = ctx->boundary_kernel_point(1, p);
          for (size_t it = 0; it < nt; ++it) {
            cplx* cc = c + 4 * (ix * nt + it);
            if (q0on) cc[0] = scale * tr[0] * E[it];
            if (fon) cc[1] = scale * tr[(q0on ? 1 : 0) + it];
            if (fb[0]) cc[2] = scale * B[0] * F[0][it];
            if (fb[1]) cc[3] = scale * B[1] * F[1][it];
          }
        }
      },
      opt.threads);

  // Fixed-order reduction.
  for (size_t i = 0; i < nn; ++i) {
    const cplx* c = &contrib[i * stride];
    for (size_t j = 0; j < nx * nt; ++j) {
      out.q0[j] += c[4 * j];
      out.qf[j] += c[4 * j + 1];
      out.qb0[j] += c[4 * j + 2];
      out.qb1[j] += c[4 * j + 3];
    }
    out.diag.max_level = std::max(out.diag.max_level, used_level[i]);
  }
  for (size_t j = 0; j < nx * nt; ++j) out.q[j] = out.q0[j] + out.qf[j] + out.qb0[j] + out.qb1[j];
  return out;
}

}  // namespace utm
