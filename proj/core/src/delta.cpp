#include "utm/delta.hpp"

#include <cmath>

#include "utm/errors.hpp"

namespace utm {

BoundaryConditions BoundaryConditions::finite(const std::array<cplx, 4>& row1, const std::array<cplx, 4>& row2) {
  BoundaryConditions bc;
  bc.kind = DomainKind::FiniteInterval;
  bc.rows = {row1, row2};
  bc.validate();
  return bc;
}

BoundaryConditions BoundaryConditions::half_line(cplx a0, cplx a1) {
  BoundaryConditions bc;
  bc.kind = DomainKind::HalfLine;
  bc.a0 = a0;
  bc.a1 = a1;
  bc.validate();
  return bc;
}

BoundaryConditions BoundaryConditions::whole_line() {
  BoundaryConditions bc;
  bc.kind = DomainKind::WholeLine;
  return bc;
}

cplx BoundaryConditions::minor(int i, int j) const {
  return rows[0][i - 1] * rows[1][j - 1] - rows[0][j - 1] * rows[1][i - 1];
}

double BoundaryConditions::scale() const {
  double s = 0.0;
  if (kind == DomainKind::HalfLine) return std::max(std::abs(a0), std::abs(a1));
  for (const auto& r : rows)
    for (cplx v : r) s = std::max(s, std::abs(v));
  return s;
}

void BoundaryConditions::validate() const {
  if (kind == DomainKind::HalfLine) {
    if (a0 == 0.0 && a1 == 0.0) raise(ErrorKind::BoundaryRank, "half-line boundary pair (a0, a1) is zero");
    return;
  }
  if (kind != DomainKind::FiniteInterval) return;
  double sc = scale();
  if (sc == 0.0) raise(ErrorKind::BoundaryRank, "boundary matrix is zero");
  double m = 0.0;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) m = std::max(m, std::abs(minor(i, j)));
  if (m <= 1e-12 * sc * sc) raise(ErrorKind::BoundaryRank, "boundary matrix (a:b) has rank < 2");
}

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::Case1: return "Case1";
    case CaseId::Case2: return "Case2";
    case CaseId::Case3: return "Case3";
    case CaseId::Case4: return "Case4";
    case CaseId::Unsupported: return "Unsupported";
  }
  return "Unsupported";
}

BoundaryCase classify(const BoundaryConditions& bc, const DispersionCache& cache) {
  if (bc.kind != DomainKind::FiniteInterval) raise(ErrorKind::Argument, "classify: finite-interval conditions only");
  bc.validate();
  const double sc = bc.scale();
  const double tol = 1e-12 * sc * sc;
  const cplx mul = cache.mu(cache.lo()), mur = cache.mu(cache.hi());
  const double mscale = sc * sc * std::max(1.0 / std::abs(mul), 1.0 / std::abs(mur));

  BoundaryCase out;
  out.m_c0 = bc.minor(1, 4) / mul - bc.minor(2, 3) / mur;
  out.m_c1 = bc.minor(1, 4) / mul + bc.minor(2, 3) / mur;
  out.m_s = bc.minor(1, 3) / (mul * mur);
  cplx ul = cache.ufrak(cache.lo()), ur = cache.ufrak(cache.hi());
  out.u_plus = ur + ul;
  out.u_minus = ur - ul;

  auto zero = [](cplx v, double t) { return std::abs(v) <= t; };
  const bool r12 = zero(bc.minor(1, 2), tol), r34 = zero(bc.minor(3, 4), tol);
  if (!zero(bc.minor(2, 4), tol)) {
    out.id = CaseId::Case1;
    out.regular = true;
  } else if (!zero(out.m_c0, 1e-12 * mscale)) {
    out.id = CaseId::Case2;
    out.regular = true;
  } else if (zero(out.m_c1, 1e-12 * mscale)) {
    if (!zero(bc.minor(1, 3), tol)) {
      out.id = CaseId::Case3;
      out.regular = r12 && r34;
      if (!out.regular) out.note = "(a:b)_{1,2} or (a:b)_{3,4} nonzero";
    } else {
      out.id = CaseId::Unsupported;
      out.note = "no boundary case matches";
    }
  } else {
    cplx v = out.m_c1 * out.u_plus - 8.0 * out.m_s;
    double vscale = std::abs(out.m_c1) * std::max(1.0, std::abs(out.u_plus)) + 8.0 * std::abs(out.m_s);
    if (std::abs(v) <= 1e-8 * vscale) {
      out.id = CaseId::Unsupported;
      out.note = "warning: m_c1 u_+ - 8 m_s is numerically zero";
    } else {
      out.id = CaseId::Case4;
      out.regular = false;
      ValidationItem smooth = check_u_smoothness(cache);
      if (!smooth.passed) out.note = "warning: u' continuity check failed";
    }
  }
  return out;
}

EndpointData endpoint_data(const DispersionCache& cache, const SpectralParam& s) {
  CoefficientPoint l = cache.at(cache.lo());
  CoefficientPoint r = cache.at(cache.hi());
  EndpointData e;
  e.kk = s.k;
  e.kn_l = k_n(l, s);
  e.kn_r = k_n(r, s);
  e.sbn_l = sqrt_beta_n(l, s);
  e.sbn_r = sqrt_beta_n(r, s);
  e.beta_l = l.beta;
  e.beta_r = r.beta;
  return e;
}

DeltaCoefficients delta_coefficients(const BoundaryConditions& bc, const EndpointData& e, int N) {
  DeltaCoefficients d;
  const cplx m12 = bc.minor(1, 2), m34 = bc.minor(3, 4), m14 = bc.minor(1, 4), m23 = bc.minor(2, 3);
  const cplx m24 = bc.minor(2, 4), m13 = bc.minor(1, 3);
  d.a = (e.beta_r * m12 + e.beta_l * m34) / (e.kk * e.sbn_l * e.sbn_r);
  d.c.resize(N + 1);
  d.s.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    d.c[n] = sg * m14 / e.kn_l - m23 / e.kn_r;
    d.s[n] = sg * m24 + m13 / (e.kn_l * e.kn_r);
  }
  return d;
}

namespace {

struct ScriptSums {
  cplx Xi, sum;
  cplx a;
};

ScriptSums script_sums(const BoundaryConditions& bc, const AccumSeries& forward, const DispersionCache& cache) {
  if (bc.kind != DomainKind::FiniteInterval) raise(ErrorKind::Argument, "finite-interval conditions required");
  const size_t ie = forward.last();
  if (forward.direction() != Direction::Forward || forward.first() != 0 ||
      std::abs(forward.grid().x(ie) - cache.hi()) > 1e-12 * (cache.hi() - cache.lo()))
    raise(ErrorKind::Coverage, "forward series must span the interval");
  EndpointData e = endpoint_data(cache, forward.param());
  DeltaCoefficients d = delta_coefficients(bc, e, forward.N());
  ScriptSums out;
  out.Xi = std::exp(forward.phase(ie));
  out.a = d.a;
  cplx s = 0.0;
  for (int n = 0; n <= forward.N(); ++n) s += d.c[n] * forward.script_c(n, ie) + d.s[n] * forward.script_s(n, ie);
  out.sum = s;
  return out;
}

}  // namespace

cplx delta_fi(const BoundaryConditions& bc, const AccumSeries& forward, const DispersionCache& cache) {
  ScriptSums ss = script_sums(bc, forward, cache);
  return cplx(0.0, 2.0) * (ss.a * ss.Xi + ss.sum);
}

cplx characteristic_fi(const BoundaryConditions& bc, const AccumSeries& forward, const DispersionCache& cache) {
  ScriptSums ss = script_sums(bc, forward, cache);
  return forward.param().k * (ss.a + ss.sum / ss.Xi);
}

cplx delta_hl(const BoundaryConditions& bc, const AccumSeries& tail, const DispersionCache& cache) {
  if (bc.kind != DomainKind::HalfLine) raise(ErrorKind::Argument, "half-line conditions required");
  if (tail.direction() != Direction::Backward || tail.first() != 0)
    raise(ErrorKind::Coverage, "tail series must cover x_l");
  CoefficientPoint l = cache.at(cache.lo());
  cplx knl = k_n(l, tail.param());
  cplx sum = 0.0;
  for (int n = 0; n <= tail.N(); ++n) {
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    sum += (sg * I * bc.a0 / knl - bc.a1) * tail.e(n, 0);
  }
  return 2.0 * sum;
}

cplx delta_wl(const AccumSeries& tilde, const AccumSeries& tail, size_t split) {
  if (!tilde.covers(split) || !tail.covers(split)) raise(ErrorKind::Coverage, "split point not covered");
  const int N = std::min(tilde.N(), tail.N());
  cplx total = 0.0;
  for (int m = 0; m <= N; m += 2) {
    cplx em = 0.0;
    for (int l = 0; l <= m; ++l) em += tilde.etilde(m - l, split) * tail.e(l, split);
    total += em;
  }
  return total;
}

std::vector<cplx> delta_partial_sums(const BoundaryConditions& bc, const AccumSeries& forward,
                                     const AccumSeries& backward, const DispersionCache& cache) {
  const int N = std::min(forward.N(), backward.N());
  std::vector<cplx> out(N + 1, 0.0);
  cplx run = 0.0;
  switch (bc.kind) {
    case DomainKind::FiniteInterval: {
      ScriptSums base = script_sums(bc, forward, cache);
      EndpointData e = endpoint_data(cache, forward.param());
      DeltaCoefficients d = delta_coefficients(bc, e, N);
      const size_t ie = forward.last();
      for (int n = 0; n <= N; ++n) {
        run += d.c[n] * forward.script_c(n, ie) + d.s[n] * forward.script_s(n, ie);
        out[n] = cplx(0.0, 2.0) * (base.a * base.Xi + run);
      }
      break;
    }
    case DomainKind::HalfLine: {
      CoefficientPoint l = cache.at(cache.lo());
      cplx knl = k_n(l, backward.param());
      for (int n = 0; n <= N; ++n) {
        double sg = (n % 2 == 0) ? 1.0 : -1.0;
        run += 2.0 * (sg * I * bc.a0 / knl - bc.a1) * backward.e(n, 0);
        out[n] = run;
      }
      break;
    }
    case DomainKind::WholeLine: {
      for (int m = 0; m <= N; ++m) {
        if (m % 2 == 0)
          for (int l = 0; l <= m; ++l) run += forward.etilde(m - l, 0) * backward.e(l, 0);
        out[m] = run;
      }
      break;
    }
  }
  return out;
}

cplx delta_at(const SpectralParam& s, const BoundaryConditions& bc, const DispersionCache& cache, int N) {
  switch (bc.kind) {
    case DomainKind::FiniteInterval: {
      AccumSeries f = propagate_on(cache, s, cache.lo(), cache.hi(), {}, Direction::Forward, N);
      return delta_fi(bc, f, cache);
    }
    case DomainKind::HalfLine: {
      AccumSeries t = propagate_on(cache, s, cache.lo(), cache.hi(), {}, Direction::Backward, N);
      return delta_hl(bc, t, cache);
    }
    case DomainKind::WholeLine: {
      double mid = 0.5 * (cache.lo() + cache.hi());
      AccumSeries f = propagate_on(cache, s, cache.lo(), cache.hi(), {mid}, Direction::Forward, N);
      AccumSeries t = propagate_on(cache, s, cache.lo(), cache.hi(), {mid}, Direction::Backward, N);
      auto sf = f.grid().find_point(mid);
      auto st = t.grid().find_point(mid);
      if (!sf || !st || *sf != *st) raise(ErrorKind::Coverage, "split point mismatch");
      return delta_wl(f, t, *sf);
    }
  }
  return 0.0;
}

cplx b0_asymptotic(cplx k, const BoundaryCase& bcase, const BoundaryConditions& bc, const DispersionCache& cache) {
  switch (bc.kind) {
    case DomainKind::WholeLine: return 1.0;
    case DomainKind::HalfLine: {
      CoefficientPoint l = cache.at(cache.lo());
      cplx knl = k_n(l, SpectralParam::general(k));
      return 2.0 * (I * bc.a0 / knl - bc.a1);
    }
    case DomainKind::FiniteInterval: break;
  }
  switch (bcase.id) {
    case CaseId::Case1: return -bc.minor(2, 4);
    case CaseId::Case2: return I * bcase.m_c0 / k;
    case CaseId::Case3: return -bcase.m_s / (k * k);
    case CaseId::Case4: return (bcase.m_c1 * bcase.u_plus - 8.0 * bcase.m_s) / (8.0 * k * k);
    case CaseId::Unsupported: break;
  }
  raise(ErrorKind::Case, "no asymptotic term for an unsupported boundary case");
}

}  // namespace utm
