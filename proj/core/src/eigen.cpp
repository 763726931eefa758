#include "utm/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "utm/errors.hpp"
#include "utm/parallel.hpp"

namespace utm {

namespace {

// Delta evaluations with grid samples shared between calls.
class DeltaEval {
 public:
  DeltaEval(const BoundaryConditions& bc, const DispersionCache& cache, int N)
      : bc_(bc), cache_(cache), idx_(series_index(N)), reduced_(cache.gamma_constant()) {}

  bool reduced() const { return reduced_; }
  SpectralParam param(cplx z) const { return reduced_ ? SpectralParam::reduced_form(z) : SpectralParam::general(z); }

  // Coarse evaluations (tolerance 1e-8) serve the winding counts.
  cplx operator()(cplx z, bool coarse = false) {
    const SpectralParam s = param(z);
    const double span = cache_.hi() - cache_.lo();
    double w = std::max(phase_panel_width(cache_, s), 1e-300);
    int j = std::max(0, static_cast<int>(std::ceil(std::log2(span / w) - 1e-9))) + (coarse ? 0 : 1);
    const double tol = coarse ? 1e-8 : kTailTolerance;
    for (int tries = 0; tries < 8; ++tries, ++j) {
      AccumSeries f = propagate(level(j), s, Direction::Forward, 0, idx_, tol);
      if (f.resolved()) return characteristic_fi(bc_, f, cache_);
    }
    raise(ErrorKind::Stiffness, "characteristic function unresolved");
  }

 private:
  std::shared_ptr<const GridSamples> level(int j) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = levels_.find(j);
    if (it != levels_.end()) return it->second;
    const double span = cache_.hi() - cache_.lo();
    auto s = sample_grid(cache_, PanelGrid(subdivide(cache_.breaks(), span / std::ldexp(1.0, j)), kCollocationOrder));
    levels_[j] = s;
    return s;
  }

  const BoundaryConditions& bc_;
  const DispersionCache& cache_;
  int idx_;
  bool reduced_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<const GridSamples>> levels_;
};

struct EdgeScan {
  int winding = 0;
  bool on_edge = false;
};

EdgeScan scan_boundary(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, int min_nodes) {
  const cplx corners[4] = {lo, cplx(hi.real(), lo.imag()), hi, cplx(lo.real(), hi.imag())};
  int per_edge = std::max(16, min_nodes / 4);
  int previous = INT32_MIN;
  for (;;) {
    std::vector<cplx> vals;
    vals.reserve(4 * per_edge + 1);
    for (int e = 0; e < 4; ++e)
      for (int j = 0; j < per_edge; ++j)
        vals.push_back(f(corners[e] + (corners[(e + 1) % 4] - corners[e]) * (static_cast<double>(j) / per_edge)));
    vals.push_back(vals.front());
    double vmax = 0.0, vmin = INFINITY;
    for (cplx v : vals) {
      vmax = std::max(vmax, std::abs(v));
      vmin = std::min(vmin, std::abs(v));
    }
    EdgeScan out;
    if (!(vmin > 1e-10 * vmax)) {
      out.on_edge = true;
      return out;
    }
    double total = 0.0, jump = 0.0;
    for (size_t j = 0; j + 1 < vals.size(); ++j) {
      double d = std::arg(vals[j + 1] / vals[j]);
      total += d;
      jump = std::max(jump, std::abs(d));
    }
    out.winding = static_cast<int>(std::lround(total / (2.0 * pi)));
    if (jump < 0.125 * pi || (jump < 0.25 * pi && out.winding == previous)) return out;
    previous = jump < 0.25 * pi ? out.winding : INT32_MIN;
    per_edge *= 2;
    if (per_edge > 65536) raise(ErrorKind::RootIsolation, "winding count did not stabilise");
  }
}

struct Rect {
  cplx lo, hi;
  int winding;
  int depth;
};

bool newton(const std::function<cplx(cplx)>& f, cplx& z, double tol) {
  for (int it = 0; it < 60; ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    cplx fz = f(z);
    if (fz == 0.0) return true;
    cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
    if (d == 0.0) return false;
    cplx step = fz / d;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return true;
  }
  return false;
}

bool inside(cplx z, cplx lo, cplx hi, double slack) {
  return z.real() >= lo.real() - slack && z.real() <= hi.real() + slack && z.imag() >= lo.imag() - slack &&
         z.imag() <= hi.imag() + slack;
}

cplx upper(cplx z) {
  const double tiny = 1e-12 * std::abs(z);
  if (std::abs(z.imag()) <= tiny) return z.real() < 0.0 ? -z : z;
  return z.imag() < 0.0 ? -z : z;
}

}  // namespace

cplx characteristic(const SpectralParam& s, const BoundaryConditions& bc, const DispersionCache& cache, int N) {
  AccumSeries f = propagate_on(cache, s, cache.lo(), cache.hi(), {}, Direction::Forward, series_index(N));
  return characteristic_fi(bc, f, cache);
}

int winding_number(const std::function<cplx(cplx)>& f, cplx lo, cplx hi, int min_nodes) {
  EdgeScan s = scan_boundary(f, lo, hi, min_nodes);
  if (s.on_edge) raise(ErrorKind::RootIsolation, "zero on the rectangle boundary");
  return s.winding;
}

std::vector<EigenPair> find_eigenvalues(const BoundaryConditions& bc, const DispersionCache& cache,
                                        const SearchRegion& region, int N, const EigenOptions& opt) {
  if (bc.kind != DomainKind::FiniteInterval) raise(ErrorKind::Argument, "eigenvalues need a finite interval");
  BoundaryCase bcase = classify(bc, cache);
  if (bcase.id == CaseId::Unsupported) raise(ErrorKind::Case, "unsupported boundary case: " + bcase.note);
  if (!(region.hi.real() > region.lo.real() && region.hi.imag() > region.lo.imag()))
    raise(ErrorKind::Argument, "empty search region");
  DeltaEval eval(bc, cache, N);
  std::function<cplx(cplx)> f = [&](cplx z) { return eval(z); };
  std::function<cplx(cplx)> fc = [&](cplx z) { return eval(z, true); };
  const double branch = eval.reduced() ? 0.0 : std::sqrt(cache.bounds().M_gamma) * (1.0 + 1e-3);
  auto touches_branch = [&](cplx lo, cplx hi) {
    if (branch == 0.0) return false;
    // Distance from the origin to the rectangle.
    double dx = lo.real() > 0 ? lo.real() : (hi.real() < 0 ? -hi.real() : 0.0);
    double dy = lo.imag() > 0 ? lo.imag() : (hi.imag() < 0 ? -hi.imag() : 0.0);
    return std::hypot(dx, dy) <= branch;
  };

  // Top level: perturb outward until no zero sits on the boundary.
  cplx lo = region.lo, hi = region.hi;
  const double scale = std::max(std::abs(hi - lo), 1e-12);
  std::vector<Rect> work;
  std::vector<cplx> roots;
  std::vector<int> mult;
  std::mutex mu;
  if (!touches_branch(lo, hi)) {
    EdgeScan top;
    for (int attempt = 0;; ++attempt) {
      top = scan_boundary(fc, lo, hi, opt.boundary_nodes);
      if (!top.on_edge) break;
      if (attempt == 3) raise(ErrorKind::RootIsolation, "zero on the search region boundary");
      lo -= cplx(1e-6, 1e-6) * scale * (attempt + 1.0);
      hi += cplx(1e-6, 1e-6) * scale * (attempt + 1.0);
    }
    if (top.winding > 0) work.push_back({lo, hi, top.winding, 0});
  } else {
    work.push_back({lo, hi, -1, 0});
  }

  while (!work.empty()) {
    std::vector<Rect> next;
    parallel_for(
        work.size(),
        [&](size_t wi) {
          Rect R = work[wi];
          const cplx c = 0.5 * (R.lo + R.hi);
          const double diam = std::abs(R.hi - R.lo);
          std::vector<cplx> found;
          std::vector<int> fm;
          bool split = true;
          if (R.winding == 1) {
            cplx z = c;
            if (newton(f, z, opt.newton_tol) && inside(z, R.lo, R.hi, 1e-9 * scale)) {
              found.push_back(z);
              fm.push_back(1);
              split = false;
            }
          } else if (R.winding >= 2 && diam < 1e-4 * (1.0 + std::abs(c))) {
            const double h = diam;
            cplx a = f(c), b = (f(c + h) - f(c - h)) / (2.0 * h), q = (f(c + h) - 2.0 * a + f(c - h)) / (2.0 * h * h);
            cplx disc = std::sqrt(b * b - 4.0 * a * q);
            cplx z1 = c + (-b + disc) / (2.0 * q), z2 = c + (-b - disc) / (2.0 * q);
            found = {z1, z2};
            fm = {2, 2};
            split = false;
          }
          std::vector<Rect> kids;
          if (split) {
            if (R.depth >= region.max_depth) raise(ErrorKind::RootIsolation, "subdivision depth exceeded");
            // Off-centre split lines avoid symmetry axes.
            for (int attempt = 0;; ++attempt) {
              const double fx = 0.5 + 0.0371 + 0.013 * attempt, fy = 0.5 - 0.0293 + 0.011 * attempt;
              const double mx = R.lo.real() + fx * (R.hi.real() - R.lo.real());
              const double my = R.lo.imag() + fy * (R.hi.imag() - R.lo.imag());
              const cplx q[4][2] = {{R.lo, cplx(mx, my)},
                                    {cplx(mx, R.lo.imag()), cplx(R.hi.real(), my)},
                                    {cplx(R.lo.real(), my), cplx(mx, R.hi.imag())},
                                    {cplx(mx, my), R.hi}};
              kids.clear();
              bool edge = false;
              for (auto& qq : q) {
                if (touches_branch(qq[0], qq[1])) {
                  if (std::abs(qq[1] - qq[0]) > 1e-3 * scale) kids.push_back({qq[0], qq[1], -1, R.depth + 1});
                  continue;
                }
                EdgeScan s = scan_boundary(fc, qq[0], qq[1], opt.boundary_nodes);
                if (s.on_edge) {
                  edge = true;
                  break;
                }
                if (s.winding > 0) kids.push_back({qq[0], qq[1], s.winding, R.depth + 1});
              }
              if (!edge) break;
              if (attempt == 3) raise(ErrorKind::RootIsolation, "zero on a subdivision line");
            }
          }
          std::lock_guard<std::mutex> lock(mu);
          for (size_t i = 0; i < found.size(); ++i) {
            roots.push_back(found[i]);
            mult.push_back(fm[i]);
          }
          for (auto& k : kids) next.push_back(k);
        },
        opt.threads);
    std::sort(next.begin(), next.end(), [](const Rect& a, const Rect& b) {
      if (a.lo.real() != b.lo.real()) return a.lo.real() < b.lo.real();
      return a.lo.imag() < b.lo.imag();
    });
    work.swap(next);
    if (roots.size() > 4 * region.max_roots) break;
  }

  // Map to kappa in the closed upper half plane and merge +- duplicates.
  const cplx gamma = eval.reduced() ? cache.gamma_value() : 0.0;
  std::vector<EigenPair> pairs;
  std::vector<size_t> order(roots.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    cplx za = roots[a], zb = roots[b];
    if (za.real() != zb.real()) return za.real() < zb.real();
    return za.imag() < zb.imag();
  });
  for (size_t oi : order) {
    const cplx z = roots[oi];
    EigenPair p;
    p.reduced = eval.reduced();
    p.kk = z;
    p.kappa = eval.reduced() ? upper(std::sqrt(z * z - gamma)) : upper(z);
    p.lambda = -p.kappa * p.kappa;
    p.N_used = N;
    p.multiplicity = mult[oi];
    bool dup = false;
    for (auto& q : pairs)
      if (std::abs(q.kappa - p.kappa) <= 1e-7 * (1.0 + std::abs(p.kappa))) {
        dup = true;
        if (p.multiplicity == 2 && std::abs(p.kk) < std::abs(q.kk)) q.kk = p.kk;
        break;
      }
    if (!dup) pairs.push_back(p);
  }
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    double la = std::abs(a.lambda), lb = std::abs(b.lambda);
    if (la != lb) return la < lb;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  if (pairs.size() > region.max_roots) pairs.resize(region.max_roots);
  for (auto& p : pairs) {
    eigen_coefficients(p, bc, cache);
    if (opt.compute_residual) p.residual = eigen_residual(p, cache, bc);
  }
  return pairs;
}

std::vector<cplx> initial_guesses(const DispersionCache& cache, int m_max) {
  std::vector<cplx> out;
  const cplx M = cache.mfrak(cache.hi());
  if (cache.gamma_constant()) {
    const cplx g = cache.gamma_value();
    for (int m = 0; m <= m_max; ++m) {
      cplx kk = 2.0 * pi * m / M;
      out.push_back(upper(std::sqrt(kk * kk - g)));
    }
    return out;
  }
  // Rectangle centres along the real axis beyond the branch disc.
  const double b = std::sqrt(cache.bounds().M_gamma) * (1.0 + 1e-3);
  for (int m = 1; m <= m_max; ++m) out.push_back(cplx(b + pi * m / std::abs(M), 0.0));
  return out;
}

SearchRegion default_region(const DispersionCache& cache, int count) {
  const cplx M = cache.mfrak(cache.hi());
  const double span = cache.hi() - cache.lo();
  // Worst case between separated (2 pi m) and Dirichlet-like (pi m) spacing.
  const double step = pi / std::abs(M);
  SearchRegion r;
  const double top = step * (count + 0.5) + 1.0;
  const double h = 2.0 + std::abs(cache.bounds().l1_rho) + 0.5 / span;
  r.lo = cplx(-0.37 * step, -h);
  r.hi = cplx(top, h);
  if (!cache.gamma_constant()) r.lo = cplx(std::sqrt(cache.bounds().M_gamma) * 1.001 + 1e-6, -h);
  r.max_roots = static_cast<size_t>(std::max(count, 1)) * 4;
  return r;
}

void eigen_coefficients(EigenPair& pair, const BoundaryConditions& bc, const DispersionCache& cache) {
  const SpectralParam s = pair.reduced ? SpectralParam::reduced_form(pair.kk) : SpectralParam::general(pair.kk);
  AccumSeries f = propagate_on(cache, s, cache.lo(), cache.hi(), {}, Direction::Forward, series_index(pair.N_used));
  const size_t ie = f.last();
  cplx SC = 0.0, SS = 0.0, AC = 0.0, AS = 0.0;
  for (int n = 0; n <= f.N(); ++n) {
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    SC += f.c(n, ie);
    SS += f.s(n, ie);
    AC += sg * f.c(n, ie);
    AS += sg * f.s(n, ie);
  }
  CoefficientPoint l = cache.at(cache.lo()), r = cache.at(cache.hi());
  const cplx sl = sqrt_beta_n(l, s), sr = sqrt_beta_n(r, s), knl = k_n(l, s), knr = k_n(r, s);
  for (int row = 0; row < 2; ++row) {
    const auto& a = bc.rows[row];
    cplx stuffC = a[0] / sl + a[2] / sr * SC - a[3] * knr / sr * AS;
    cplx stuffS = a[1] * knl / sl + a[2] / sr * SS + a[3] * knr / sr * AC;
    double sc = std::abs(a[0] / sl) + std::abs(a[1] * knl / sl) + std::abs(a[2] / sr) * (std::abs(SC) + std::abs(SS)) +
                std::abs(a[3] * knr / sr) * (std::abs(AS) + std::abs(AC));
    if (std::abs(stuffC) + std::abs(stuffS) > 1e-8 * sc) {
      pair.C = -stuffS;
      pair.S = stuffC;
      return;
    }
  }
  pair.C = 1.0;
  pair.S = 0.0;
}

std::vector<cplx> eigenfunction(const EigenPair& pair, const DispersionCache& cache, const std::vector<double>& x) {
  const SpectralParam s = pair.reduced ? SpectralParam::reduced_form(pair.kk) : SpectralParam::general(pair.kk);
  AccumSeries f = propagate_on(cache, s, cache.lo(), cache.hi(), {}, Direction::Forward, series_index(pair.N_used));
  std::vector<cplx> out;
  out.reserve(x.size());
  for (double xv : x) {
    AccumSeries::Point p = f.at(xv);
    cplx sc = 0.0, ss = 0.0;
    for (int n = 0; n <= f.N(); ++n) {
      sc += p.c(n);
      ss += p.s(n);
    }
    out.push_back((pair.C * sc + pair.S * ss) / sqrt_beta_n(cache.at(xv), s));
  }
  return out;
}

cplx eigenfunction(const EigenPair& pair, const DispersionCache& cache, double x) {
  return eigenfunction(pair, cache, std::vector<double>{x})[0];
}

double eigen_residual(const EigenPair& pair, const DispersionCache& cache, const BoundaryConditions& bc, size_t n) {
  const double a = cache.lo(), b = cache.hi(), h = (b - a) / static_cast<double>(n);
  std::vector<double> x(n + 1);
  for (size_t i = 0; i <= n; ++i) x[i] = a + h * static_cast<double>(i);
  x.back() = b;
  std::vector<cplx> X = eigenfunction(pair, cache, x);
  double xmax = 0.0;
  for (cplx v : X) xmax = std::max(xmax, std::abs(v));
  if (xmax == 0.0) return INFINITY;
  const double norm = xmax * (std::abs(pair.lambda) + std::abs(pair.kappa) + 1.0);
  double res = 0.0;
  for (size_t i = 2; i + 2 <= n; ++i) {
    cplx dx = (-X[i + 2] + 8.0 * X[i + 1] - 8.0 * X[i - 1] + X[i - 2]) / (12.0 * h);
    cplx dxx = (-X[i + 2] + 16.0 * X[i + 1] - 30.0 * X[i] + 16.0 * X[i - 1] - X[i - 2]) / (12.0 * h * h);
    CoefficientPoint c = cache.at(x[i]);
    cplx r = c.alpha * (c.beta * dxx + cache.beta_prime(x[i]) * dx) + c.gamma * X[i] - pair.lambda * X[i];
    res = std::max(res, std::abs(r) / norm);
  }
  cplx dl = (-25.0 * X[0] + 48.0 * X[1] - 36.0 * X[2] + 16.0 * X[3] - 3.0 * X[4]) / (12.0 * h);
  cplx dr = (25.0 * X[n] - 48.0 * X[n - 1] + 36.0 * X[n - 2] - 16.0 * X[n - 3] + 3.0 * X[n - 4]) / (12.0 * h);
  const double bnorm = xmax * (1.0 + std::abs(pair.kappa));
  for (const auto& row : bc.rows) {
    double rs = std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]) + std::abs(row[3]);
    cplx r = row[0] * X[0] + row[1] * dl + row[2] * X[n] + row[3] * dr;
    res = std::max(res, std::abs(r) / (bnorm * rs));
  }
  return res;
}

}  // namespace utm
