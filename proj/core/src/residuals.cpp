#include "utm/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"

namespace utm {

namespace {

bool uniform(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  double h = v[1] - v[0];
  for (size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * std::abs(h)) return false;
  return true;
}

}  // namespace

PdeResidual pde_residual(const SolutionField& f, const DispersionCache& cache, const ProblemData& data) {
  const size_t nx = f.nx(), nt = f.nt();
  if (nx < 9 || nt < 9 || !uniform(f.x) || !uniform(f.t))
    raise(ErrorKind::Argument, "pde_residual needs uniform grids with at least 9 points");
  const double h = f.x[1] - f.x[0], dt = f.t[1] - f.t[0];
  PdeResidual out;
  for (cplx v : f.q) out.scale = std::max(out.scale, std::abs(v));
  if (out.scale == 0.0) out.scale = 1.0;

  auto residual_at = [&](size_t ix, size_t it, size_t s) {
    const double hs = h * s, ts = dt * s;
    auto q = [&](long dx, long dtt) { return f.at(ix + dx * static_cast<long>(s), it + dtt * static_cast<long>(s)); };
    cplx qx = (-q(2, 0) + 8.0 * q(1, 0) - 8.0 * q(-1, 0) + q(-2, 0)) / (12.0 * hs);
    cplx qxx = (-q(2, 0) + 16.0 * q(1, 0) - 30.0 * q(0, 0) + 16.0 * q(-1, 0) - q(-2, 0)) / (12.0 * hs * hs);
    cplx qt = (-q(0, 2) + 8.0 * q(0, 1) - 8.0 * q(0, -1) + q(0, -2)) / (12.0 * ts);
    CoefficientPoint c = cache.at(f.x[ix]);
    cplx bp = cache.beta_prime(f.x[ix]);
    cplx forcing = data.f ? data.f(f.x[ix], f.t[it]) : 0.0;
    cplx r = qt - c.alpha * (c.beta * qxx + bp * qx) - c.gamma * q(0, 0) - forcing;
    return std::abs(r) / out.scale;
  };
  for (size_t ix = 4; ix + 4 < nx; ++ix)
    for (size_t it = 4; it + 4 < nt; ++it) {
      out.residual = std::max(out.residual, residual_at(ix, it, 1));
      out.coarse = std::max(out.coarse, residual_at(ix, it, 2));
      ++out.points;
    }
  out.estimate = out.coarse / 16.0;
  return out;
}

BcResidual bc_residual(const SolutionField& f, const BoundaryConditions& bc, const ProblemData& data) {
  const size_t nx = f.nx(), nt = f.nt();
  if (nx < 5 || !uniform(f.x)) raise(ErrorKind::Argument, "bc_residual needs a uniform x-grid with 5 points");
  const double h = f.x[1] - f.x[0];
  BcResidual out;
  out.flagged = !f.diag.regular;
  for (size_t it = 0; it < nt; ++it) {
    auto q = [&](size_t ix) { return f.at(ix, it); };
    const size_t n = nx - 1;
    cplx ql = q(0), qr = q(n);
    cplx dl = (-25.0 * q(0) + 48.0 * q(1) - 36.0 * q(2) + 16.0 * q(3) - 3.0 * q(4)) / (12.0 * h);
    cplx dr = (25.0 * q(n) - 48.0 * q(n - 1) + 36.0 * q(n - 2) - 16.0 * q(n - 3) + 3.0 * q(n - 4)) / (12.0 * h);
    const double tv = f.t[it];
    switch (bc.kind) {
      case DomainKind::FiniteInterval: {
        cplx g[2] = {data.f0 ? data.f0(tv) : 0.0, data.f1 ? data.f1(tv) : 0.0};
        for (int l = 0; l < 2; ++l) {
          const auto& row = bc.rows[l];
          double r = std::abs(row[0] * ql + row[1] * dl + row[2] * qr + row[3] * dr - g[l]);
          (l == 0 ? out.row1 : out.row2).push_back(r);
          out.max = std::max(out.max, r);
        }
        break;
      }
      case DomainKind::HalfLine: {
        double r = std::abs(bc.a0 * ql + bc.a1 * dl - (data.f0 ? data.f0(tv) : 0.0));
        out.row1.push_back(r);
        out.max = std::max(out.max, r);
        break;
      }
      case DomainKind::WholeLine: {
        double r = std::max(std::abs(ql), std::abs(qr));
        out.row1.push_back(r);
        out.max = std::max(out.max, r);
        break;
      }
    }
  }
  return out;
}

IcResidual ic_residual(const SolutionField& f, const ProblemData& data, size_t it) {
  IcResidual out;
  if (it >= f.nt()) raise(ErrorKind::Argument, "time index out of range");
  for (size_t ix = 0; ix < f.nx(); ++ix) {
    const size_t j = ix * f.nt() + it;
    out.qf_max = std::max(out.qf_max, std::abs(f.qf[j]));
    out.qb_max = std::max(out.qb_max, std::abs(f.qb0[j] + f.qb1[j]));
    if (ix == 0 || ix + 1 == f.nx()) continue;
    cplx q0 = data.q0 ? data.q0(f.x[ix]) : 0.0;
    out.max_error = std::max(out.max_error, std::abs(f.q[j] - q0));
  }
  return out;
}

}  // namespace utm
