#include "utm/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "utm/errors.hpp"
#include "utm/presets.hpp"

namespace utm {

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

void IdentityReport::append(const IdentityReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

namespace {

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, cplx k, double x, int n) {
    if (!(v <= value)) {
      value = v;
      std::ostringstream os;
      os << "k=(" << k.real() << "," << k.imag() << ") x=" << x << " n=" << n;
      where = os.str();
    }
  }
};

IdentityCheck make_check(const std::string& name, const Worst& w, double threshold, bool strict = false) {
  IdentityCheck c;
  c.name = name;
  c.measured = w.value;
  c.threshold = threshold;
  c.passed = std::isfinite(w.value) && (strict ? w.value < threshold : w.value <= threshold);
  c.detail = w.where;
  return c;
}

double rel(cplx diff, double scale) { return scale > 1e-300 ? std::abs(diff) / scale : std::abs(diff); }

// Differences are taken of values accurate to about 1e-12 of the leading
// order, so the relative test is floored at that level times 1/h.
double fd_floor(const LocalWave& lw, const std::vector<cplx>& a, const std::vector<cplx>& b = {}) {
  double vmax = 0.0;
  for (cplx v : a) vmax = std::max(vmax, std::abs(v));
  for (cplx v : b) vmax = std::max(vmax, std::abs(v));
  return 1e-9 * (std::abs(lw.ikn) + std::abs(lw.eta)) * vmax;
}

// Absolute accuracy of tabulated values (panel tail floor summed over a grid).
constexpr double kValueFloor = 1e-14;

std::vector<double> interior_points(const DispersionCache& cache, int count, std::mt19937_64& rng) {
  double a = cache.lo(), b = cache.hi(), span = b - a;
  std::uniform_real_distribution<double> u(a + 0.1 * span, b - 0.1 * span);
  std::vector<double> xs(static_cast<size_t>(count));
  for (auto& x : xs) x = u(rng);
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<double> with_stencils(const std::vector<double>& xs, double h) {
  std::vector<double> pts;
  for (double x : xs)
    for (int j = -2; j <= 2; ++j) pts.push_back(x + j * h);
  std::sort(pts.begin(), pts.end());
  return pts;
}

template <class F>
std::vector<cplx> fd(const F& values, double x, double h, int N) {
  auto m2 = values(x - 2 * h), m1 = values(x - h), p1 = values(x + h), p2 = values(x + 2 * h);
  std::vector<cplx> d(static_cast<size_t>(N) + 1);
  for (int n = 0; n <= N; ++n)
    d[n] = (-p2[n] + 8.0 * p1[n] - 8.0 * m1[n] + m2[n]) / (12.0 * h);
  return d;
}

enum class Val { C, S, E, Et };

std::vector<cplx> series_values(const AccumSeries& s, double x, Val v) {
  AccumSeries::Point p = s.at(x);
  std::vector<cplx> out(static_cast<size_t>(s.N()) + 1);
  for (int n = 0; n <= s.N(); ++n) {
    switch (v) {
      case Val::C: out[n] = p.c(n); break;
      case Val::S: out[n] = p.s(n); break;
      case Val::E: out[n] = p.e(n); break;
      case Val::Et: out[n] = p.etilde(n); break;
    }
  }
  return out;
}

// ||eta||_1 between grid start and each break, from the Gauss nodes.
std::vector<double> running_l1(const AccumSeries& s) {
  const PanelGrid& g = s.grid();
  std::vector<double> cum(g.panels() + 1, 0.0);
  for (size_t p = 0; p < g.panels(); ++p) {
    double sum = 0.0;
    for (int j = 0; j < g.order(); ++j) {
      size_t i = g.node_point(p, j);
      sum += g.weight(i) * std::abs(local_wave(s.samples().coef[i], s.param()).eta);
    }
    cum[p + 1] = cum[p] + sum;
  }
  return cum;
}

}  // namespace

std::vector<cplx> contour_samples(const DispersionCache& cache, int count, std::uint64_t seed) {
  ContourParams cp = contour_params(cache);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> ks;
  for (int i = 0; i < count; ++i) {
    double pick = u(rng);
    if (pick < 1.0 / 3.0) {
      double th = cp.theta0 + u(rng) * (pi - 2.0 * cp.theta0);
      ks.push_back(std::polar(cp.r, th));
    } else {
      double rho = cp.r * (1.0 + 5.0 * u(rng));
      ks.push_back(std::polar(rho, pick < 2.0 / 3.0 ? cp.theta0 : pi - cp.theta0));
    }
  }
  return ks;
}

IdentityReport derivative_identities(const DispersionCache& cache, const IdentityOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const int N = opt.N;
  const double h = opt.fd_step;
  Worst w_fwd, w_bwd, w_tail, w_tilde;
  const DomainKind kind = cache.domain().kind;

  for (cplx k : contour_samples(cache, opt.samples, opt.seed)) {
    const SpectralParam s = SpectralParam::general(k);
    std::vector<double> xs = interior_points(cache, opt.x_samples, rng);
    std::vector<double> pts = with_stencils(xs, h);
    auto wave = [&](double x) { return local_wave(cache.at(x), s); };

    auto check_cs = [&](const AccumSeries& ser, bool forward, Worst& w) {
      for (double x : xs) {
        auto dC = fd([&](double y) { return series_values(ser, y, Val::C); }, x, h, N);
        auto dS = fd([&](double y) { return series_values(ser, y, Val::S); }, x, h, N);
        auto C = series_values(ser, x, Val::C), S = series_values(ser, x, Val::S);
        LocalWave lw = wave(x);
        cplx kn = lw.ikn / I;
        const double floor = fd_floor(lw, C, S);
        for (int n = 0; n <= N; ++n) {
          cplx cm = n > 0 ? C[n - 1] : 0.0, sm = n > 0 ? S[n - 1] : 0.0;
          double sg = (n % 2 == 0) ? 1.0 : -1.0;
          cplx rc, rs;
          double scale_c, scale_s;
          if (forward) {
            rc = 0.5 * lw.eta * cm - sg * kn * S[n];
            rs = 0.5 * lw.eta * sm + sg * kn * C[n];
          } else {
            rc = -0.5 * lw.eta * cm + kn * S[n];
            rs = 0.5 * lw.eta * sm - kn * C[n];
          }
          scale_c = std::abs(0.5 * lw.eta * cm) + std::abs(kn * S[n]) + floor;
          scale_s = std::abs(0.5 * lw.eta * sm) + std::abs(kn * C[n]) + floor;
          w.update(rel(dC[n] - rc, scale_c), k, x, n);
          w.update(rel(dS[n] - rs, scale_s), k, x, n);
        }
      }
    };

    if (kind == DomainKind::FiniteInterval) {
      check_cs(accum_cs_forward(s, cache.lo(), pts, N, cache), true, w_fwd);
      check_cs(accum_cs_backward(s, cache.hi(), pts, N, cache), false, w_bwd);
      continue;
    }
    AccumSeries tail = accum_e_tail(s, pts, N, cache);
    for (double x : xs) {
      auto dE = fd([&](double y) { return series_values(tail, y, Val::E); }, x, h, N);
      auto E = series_values(tail, x, Val::E);
      LocalWave lw = wave(x);
      const double floor = fd_floor(lw, E);
      for (int n = 0; n <= N; ++n) {
        cplx em = n > 0 ? E[n - 1] : 0.0;
        double odd = (n % 2 == 0) ? 0.0 : 2.0;
        cplx r = -0.5 * lw.eta * em - odd * lw.ikn * E[n];
        w_tail.update(rel(dE[n] - r, std::abs(0.5 * lw.eta * em) + std::abs(odd * lw.ikn * E[n]) + floor), k, x,
                      n);
      }
    }
    if (kind == DomainKind::WholeLine) {
      AccumSeries tilde = accum_e_tilde_tail(s, pts, N, cache);
      for (double x : xs) {
        auto dE = fd([&](double y) { return series_values(tilde, y, Val::Et); }, x, h, N);
        auto E = series_values(tilde, x, Val::Et);
        LocalWave lw = wave(x);
        const double floor = fd_floor(lw, E);
        for (int n = 0; n <= N; ++n) {
          cplx em = n > 0 ? E[n - 1] : 0.0;
          double odd = (n % 2 == 0) ? 0.0 : 2.0;
          cplx r = 0.5 * lw.eta * em + odd * lw.ikn * E[n];
          w_tilde.update(rel(dE[n] - r, std::abs(0.5 * lw.eta * em) + std::abs(odd * lw.ikn * E[n]) + floor), k,
                         x, n);
        }
      }
    }
  }

  IdentityReport rep;
  if (kind == DomainKind::FiniteInterval) {
    rep.checks.push_back(make_check("derivative C_n, S_n (x_l, x)", w_fwd, 1e-6));
    rep.checks.push_back(make_check("derivative C_n, S_n (x, x_r)", w_bwd, 1e-6));
  } else {
    rep.checks.push_back(make_check("derivative E_n (x, inf)", w_tail, 1e-6));
    if (kind == DomainKind::WholeLine) rep.checks.push_back(make_check("derivative tilde E_n (-inf, x)", w_tilde, 1e-6));
  }
  return rep;
}

IdentityReport composition_identities(const DispersionCache& cache, const IdentityOptions& opt) {
  std::mt19937_64 rng(opt.seed + 1);
  const int N = opt.N;
  const DomainKind kind = cache.domain().kind;
  Worst wc, ws, we;

  for (cplx k : contour_samples(cache, opt.samples, opt.seed + 1)) {
    const SpectralParam s = SpectralParam::general(k);
    std::vector<double> xs = interior_points(cache, opt.x_samples, rng);

    if (kind == DomainKind::FiniteInterval) {
      AccumSeries f = accum_cs_forward(s, cache.lo(), xs, N, cache);
      AccumSeries b = accum_cs_backward(s, cache.hi(), xs, N, cache);
      ScriptCS full = script_cs(f, f.grid().size() - 1);
      for (double x : xs) {
        ScriptCS L = script_cs(f, *f.grid().find_point(x));
        ScriptCS R = script_cs(b, *b.grid().find_point(x));
        for (int n = 0; n <= N; ++n) {
          cplx c = 0.0, sv = 0.0;
          double sc = 0.0, ss = 0.0;
          for (int l = 0; l <= n; ++l) {
            double sg = ((n - l) % 2 == 0) ? 1.0 : -1.0;
            cplx t1 = L.C[n - l] * R.C[l], t2 = sg * L.S[n - l] * R.S[l];
            cplx t3 = L.S[n - l] * R.C[l], t4 = sg * L.C[n - l] * R.S[l];
            c += t1 - t2;
            sv += t3 + t4;
            sc += std::abs(t1) + std::abs(t2);
            ss += std::abs(t3) + std::abs(t4);
          }
          wc.update(rel(full.C[n] - c, std::max(sc, std::abs(full.C[n]))), k, x, n);
          ws.update(rel(full.S[n] - sv, std::max(ss, std::abs(full.S[n]))), k, x, n);
        }
      }
    } else if (kind == DomainKind::HalfLine) {
      AccumSeries f = accum_cs_forward(s, cache.lo(), xs, N, cache);
      AccumSeries tail = accum_e_tail(s, xs, N, cache);
      for (double x : xs) {
        ScriptCS L = script_cs(f, *f.grid().find_point(x));
        AccumSeries::Point R = tail.at_point(*tail.grid().find_point(x));
        AccumSeries::Point full = tail.at_point(0);
        for (int n = 0; n <= N; ++n) {
          double sg = (n % 2 == 0) ? 1.0 : -1.0;
          cplx sum = 0.0;
          double scale = std::abs(full.e(n));
          for (int l = 0; l <= n; ++l) {
            cplx t = (L.C[n - l] - sg * I * L.S[n - l]) * R.e(l);
            sum += t;
            scale = std::max(scale, std::abs(t));
          }
          we.update(rel(full.e(n) - sum, scale), k, x, n);
        }
      }
    } else {
      AccumSeries tilde = accum_e_tilde_tail(s, xs, N, cache);
      AccumSeries tail = accum_e_tail(s, xs, N, cache);
      auto split = [&](double x, int n, double& scale) {
        AccumSeries::Point L = tilde.at_point(*tilde.grid().find_point(x));
        AccumSeries::Point R = tail.at_point(*tail.grid().find_point(x));
        cplx sum = 0.0;
        for (int l = 0; l <= n; ++l) {
          cplx t = L.etilde(n - l) * R.e(l);
          sum += t;
          scale = std::max(scale, std::abs(t));
        }
        return sum;
      };
      for (int n = 0; n <= N; n += 2) {
        double scale = 0.0;
        cplx ref = split(xs.front(), n, scale);
        for (size_t j = 1; j < xs.size(); ++j) we.update(rel(split(xs[j], n, scale) - ref, scale), k, xs[j], n);
      }
    }
  }

  IdentityReport rep;
  if (kind == DomainKind::FiniteInterval) {
    rep.checks.push_back(make_check("composition script C_n", wc, 1e-8));
    rep.checks.push_back(make_check("composition script S_n", ws, 1e-8));
  } else if (kind == DomainKind::HalfLine) {
    rep.checks.push_back(make_check("composition E_n (x_l, inf)", we, 1e-8));
  } else {
    rep.checks.push_back(make_check("whole-line split independence (even n)", we, 1e-8));
  }
  return rep;
}

IdentityReport bc_identity(const DispersionCache& cache, const IdentityOptions& opt) {
  IdentityReport rep;
  if (cache.domain().kind != DomainKind::FiniteInterval) return rep;
  Worst w;
  for (cplx k : contour_samples(cache, opt.samples, opt.seed + 2)) {
    const int M = 2 * opt.bc_order;
    AccumSeries f = accum_cs_forward(SpectralParam::general(k), cache.lo(), {}, M, cache);
    size_t last = f.grid().size() - 1;
    cplx ac = 0.0, c = 0.0, as = 0.0, sv = 0.0;
    for (int n = 0; n <= M; ++n) {
      double sg = (n % 2 == 0) ? 1.0 : -1.0;
      ac += sg * f.c(n, last);
      c += f.c(n, last);
      as += sg * f.s(n, last);
      sv += f.s(n, last);
    }
    w.update(std::abs(ac * c + as * sv - 1.0), k, cache.hi(), M);
  }
  rep.checks.push_back(make_check("eigenfunction BC identity", w, 1e-6));
  return rep;
}

IdentityReport factorial_bounds(const DispersionCache& cache, const IdentityOptions& opt) {
  const DomainKind kind = cache.domain().kind;
  Worst w;
  auto check = [&](const AccumSeries& ser, bool from_lo, bool script) {
    std::vector<double> cum = running_l1(ser);
    const PanelGrid& g = ser.grid();
    const double total = cum.back();
    for (size_t b = 0; b < cum.size(); ++b) {
      double L = from_lo ? cum[b] : total - cum[b];
      if (L <= 0.0) continue;
      size_t i = g.break_point(b);
      double bound = 1.0;
      for (int n = 1; n <= ser.N(); ++n) {
        bound *= L / (2.0 * n);
        double v = 0.0;
        if (script) {
          v = std::max(std::abs(ser.script_c(n, i)), std::abs(ser.script_s(n, i)));
        } else {
          v = std::abs(ser.family() == Family::E ? ser.e(n, i) : ser.etilde(n, i));
        }
        w.update(v / (bound + kValueFloor), ser.k(), g.x(i), n);
      }
    }
  };
  for (cplx k : contour_samples(cache, opt.samples, opt.seed + 3)) {
    const SpectralParam s = SpectralParam::general(k);
    if (kind == DomainKind::FiniteInterval) {
      check(accum_cs_forward(s, cache.lo(), {}, opt.N, cache), true, true);
      check(accum_cs_backward(s, cache.hi(), {}, opt.N, cache), false, true);
    } else {
      check(accum_e_tail(s, {}, opt.N, cache), false, false);
      if (kind == DomainKind::WholeLine) check(accum_e_tilde_tail(s, {}, opt.N, cache), true, false);
    }
  }
  IdentityReport rep;
  rep.checks.push_back(make_check("factorial bound (ratio to bound)", w, 1.0, true));
  return rep;
}

IdentityReport asymptotic_sandwich(const DispersionCache& cache, const BoundaryConditions& bc,
                                   const IdentityOptions& opt) {
  IdentityReport rep;
  BoundaryCase bcase;
  std::string label = to_string(cache.domain().kind);
  if (bc.kind == DomainKind::FiniteInterval) {
    bcase = classify(bc, cache);
    label = to_string(bcase.id);
    if (bcase.id == CaseId::Unsupported) {
      rep.checks.push_back({"asymptotic sandwich (" + label + ")", false, 0.0, 0.5, bcase.note});
      return rep;
    }
  }
  ContourParams cp = contour_params(cache);
  Worst w;
  for (double mult : {4.0, 8.0, 16.0})
    for (double th : {cp.theta0, pi - cp.theta0}) {
      cplx k = std::polar(mult * cp.r, th);
      cplx d = delta_at(SpectralParam::general(k), bc, cache, opt.N);
      w.update(std::abs(d / b0_asymptotic(k, bcase, bc, cache) - 1.0), k, 0.0, opt.N);
    }
  rep.checks.push_back(make_check("asymptotic sandwich (" + label + ")", w, 0.5, true));
  return rep;
}

IdentityReport run_identities(const DispersionCache& cache, const BoundaryConditions& bc,
                              const IdentityOptions& opt) {
  IdentityReport rep = derivative_identities(cache, opt);
  rep.append(composition_identities(cache, opt));
  rep.append(bc_identity(cache, opt));
  rep.append(factorial_bounds(cache, opt));
  rep.append(asymptotic_sandwich(cache, bc, opt));
  return rep;
}

std::vector<CaseConfig> boundary_case_configs() {
  std::vector<CaseConfig> out;
  const Domain unit = Domain::finite(0.0, 1.0);
  out.push_back({"Neumann, gaussian bump", CaseId::Case1, DispersionCache(make_preset("gaussian_bump"), unit),
                 BoundaryConditions::finite({0, 1, 0, 0}, {0, 0, 0, 1})});
  out.push_back({"periodic, cgl", CaseId::Case2, DispersionCache(make_preset("cgl"), unit),
                 BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1})});
  out.push_back({"Dirichlet, gaussian bump", CaseId::Case3, DispersionCache(make_preset("gaussian_bump"), unit),
                 BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0})});
  // Equal weights 1/mu on the derivative jumps cancel m_c0; u_+ keeps Case 4 admissible.
  DispersionCache lin(make_preset("linear"), unit);
  cplx mul = lin.mu(0.0), mur = lin.mu(1.0);
  out.push_back({"weighted derivative jump, linear beta", CaseId::Case4, lin,
                 BoundaryConditions::finite({1, 0, -1, 0}, {0, mur, 0, mul})});
  return out;
}

}  // namespace utm
