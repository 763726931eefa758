#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

#include "utm/errors.hpp"
#include "utm/oracle.hpp"

namespace utm {
namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using Vec = Eigen::VectorXcd;

// Interior rows i = 1..n-1 of alpha (beta q_x)_x + gamma q (conservative form),
// with q_0 and q_n eliminated through the two boundary rows.
struct FDSystem {
  size_t n = 0;
  double lo = 0.0, h = 0.0;
  std::vector<cplx> lower, diag, upper;  // indexed by full node i
  Eigen::Matrix<cplx, 2, 4> P;           // (q1, q2, q_{n-2}, q_{n-1}) -> (q0, qn)
  Eigen::Matrix2cd Q;                    // (g0, g1) -> (q0, qn)

  size_t m() const { return n - 1; }
  double x(size_t i) const { return lo + h * static_cast<double>(i); }
  std::array<size_t, 4> pcols() const { return {0, 1, n - 3, n - 2}; }
};

using Rows = std::array<std::array<cplx, 4>, 2>;

struct Setup {
  double lo, hi;
  Rows rows;
};

Setup domain_setup(const DispersionCache& cache, const BoundaryConditions& bc, double window) {
  const Domain& d = cache.domain();
  double W = window > 0.0 ? window : 20.0;
  switch (bc.kind) {
    case DomainKind::FiniteInterval:
      return {d.xl, d.xr, bc.rows};
    case DomainKind::HalfLine:
      return {d.xl, d.xl + W, Rows{{{bc.a0, bc.a1, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}}};
    case DomainKind::WholeLine:
      return {-W, W, Rows{{{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}}}};
  }
  raise(ErrorKind::Argument, "unknown domain kind");
}

FDSystem assemble(const DispersionCache& cache, const Setup& su, size_t n) {
  if (n < 8) raise(ErrorKind::Oracle, "finite-difference grid needs at least 8 intervals");
  const CoefficientProfile& p = cache.profile();
  FDSystem s;
  s.n = n;
  s.lo = su.lo;
  s.h = (su.hi - su.lo) / static_cast<double>(n);
  const double h2 = s.h * s.h;
  s.lower.assign(n + 1, 0.0);
  s.diag.assign(n + 1, 0.0);
  s.upper.assign(n + 1, 0.0);
  for (size_t i = 1; i < n; ++i) {
    double xi = s.x(i);
    cplx a = p.alpha(xi), g = p.gamma(xi);
    cplx bm = p.beta(xi - 0.5 * s.h), bp = p.beta(xi + 0.5 * s.h);
    s.lower[i] = a * bm / h2;
    s.upper[i] = a * bp / h2;
    s.diag[i] = -a * (bm + bp) / h2 + g;
  }

  const double t2 = 2.0 * s.h;
  Eigen::Matrix2cd B;
  Eigen::Matrix<cplx, 2, 4> C;
  for (int r = 0; r < 2; ++r) {
    const auto& row = su.rows[r];
    B(r, 0) = row[0] - 3.0 * row[1] / t2;
    B(r, 1) = row[2] + 3.0 * row[3] / t2;
    C(r, 0) = 4.0 * row[1] / t2;
    C(r, 1) = -row[1] / t2;
    C(r, 2) = row[3] / t2;
    C(r, 3) = -4.0 * row[3] / t2;
  }
  double bscale = B.cwiseAbs().maxCoeff();
  if (std::abs(B.determinant()) <= 1e-12 * bscale * bscale)
    raise(ErrorKind::Oracle, "boundary rows do not determine the end values");
  s.Q = B.inverse();
  s.P = -s.Q * C;
  return s;
}

SpMat operator_matrix(const FDSystem& s) {
  const size_t m = s.m();
  std::vector<Eigen::Triplet<cplx>> tr;
  tr.reserve(3 * m + 8);
  for (size_t i = 1; i < s.n; ++i) {
    const auto r = static_cast<Eigen::Index>(i - 1);
    tr.emplace_back(r, r, s.diag[i]);
    if (i > 1) tr.emplace_back(r, r - 1, s.lower[i]);
    if (i + 1 < s.n) tr.emplace_back(r, r + 1, s.upper[i]);
  }
  auto cols = s.pcols();
  for (int c = 0; c < 4; ++c) {
    tr.emplace_back(0, static_cast<Eigen::Index>(cols[c]), s.lower[1] * s.P(0, c));
    tr.emplace_back(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(cols[c]),
                    s.upper[s.n - 1] * s.P(1, c));
  }
  SpMat L(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  L.setFromTriplets(tr.begin(), tr.end());
  return L;
}

Eigen::MatrixXcd dense_operator(const FDSystem& s) { return Eigen::MatrixXcd(operator_matrix(s)); }

class CnRun {
 public:
  CnRun(const DispersionCache& cache, const Setup& su, const ProblemData& data, size_t n)
      : sys_(assemble(cache, su, n)), data_(data), L_(operator_matrix(sys_)) {
    const size_t m = sys_.m();
    q_.resize(static_cast<Eigen::Index>(m));
    for (size_t i = 1; i < sys_.n; ++i)
      q_[static_cast<Eigen::Index>(i - 1)] = data.q0 ? data.q0(sys_.x(i)) : cplx(0.0);
  }

  const FDSystem& system() const { return sys_; }

  // Boundary data plus forcing at interior nodes.
  Vec source(double t) const {
    Vec S = Vec::Zero(static_cast<Eigen::Index>(sys_.m()));
    Eigen::Vector2cd g(data_.f0 ? data_.f0(t) : cplx(0.0), data_.f1 ? data_.f1(t) : cplx(0.0));
    Eigen::Vector2cd e = sys_.Q * g;
    S[0] += sys_.lower[1] * e[0];
    S[S.size() - 1] += sys_.upper[sys_.n - 1] * e[1];
    if (data_.f)
      for (size_t i = 1; i < sys_.n; ++i) S[static_cast<Eigen::Index>(i - 1)] += data_.f(sys_.x(i), t);
    return S;
  }

  void backward_euler(double t, double dt) {
    auto& lu = factor(dt);
    Vec rhs = q_ + dt * source(t + dt);
    q_ = lu.solve(rhs);
    check(lu);
  }

  void cn_step(double t, double dt) {
    auto& lu = factor(0.5 * dt);
    Vec rhs = q_ + 0.5 * dt * (L_ * q_) + 0.5 * dt * (source(t) + source(t + dt));
    q_ = lu.solve(rhs);
    check(lu);
  }

  // Full nodal vector at time t (boundary values from the rows).
  std::vector<cplx> nodes(double t) const {
    const size_t n = sys_.n;
    std::vector<cplx> u(n + 1);
    for (size_t i = 1; i < n; ++i) u[i] = q_[static_cast<Eigen::Index>(i - 1)];
    Eigen::Vector2cd g(data_.f0 ? data_.f0(t) : cplx(0.0), data_.f1 ? data_.f1(t) : cplx(0.0));
    Eigen::Vector4cd qc(u[1], u[2], u[n - 2], u[n - 1]);
    Eigen::Vector2cd e = sys_.P * qc + sys_.Q * g;
    u[0] = e[0];
    u[n] = e[1];
    return u;
  }

 private:
  using LU = Eigen::SparseLU<SpMat>;

  // Factorization of I - c L, cached by c.
  LU& factor(double c) {
    auto it = lus_.find(c);
    if (it != lus_.end()) return *it->second;
    SpMat A = -c * L_;
    for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += 1.0;
    A.makeCompressed();
    auto lu = std::make_unique<LU>();
    lu->compute(A);
    if (lu->info() != Eigen::Success) raise(ErrorKind::Oracle, "Crank-Nicolson matrix is singular");
    return *lus_.emplace(c, std::move(lu)).first->second;
  }
  static void check(const LU& lu) {
    if (lu.info() != Eigen::Success) raise(ErrorKind::Oracle, "Crank-Nicolson solve failed");
  }

  FDSystem sys_;
  const ProblemData& data_;
  SpMat L_;
  Vec q_;
  std::map<double, std::unique_ptr<LU>> lus_;
};

cplx cubic_at(const FDSystem& s, const std::vector<cplx>& u, double x) {
  double pos = (x - s.lo) / s.h;
  long i = static_cast<long>(std::floor(pos)) - 1;
  i = std::clamp(i, 0L, static_cast<long>(s.n) - 3);
  cplx sum = 0.0;
  for (long a = 0; a < 4; ++a) {
    double l = 1.0;
    for (long b = 0; b < 4; ++b)
      if (b != a) l *= (pos - static_cast<double>(i + b)) / static_cast<double>(a - b);
    sum += l * u[static_cast<size_t>(i + a)];
  }
  return sum;
}

// One run; values at (x, t) in x-major order.
std::vector<cplx> cn_values(const DispersionCache& cache, const Setup& su, const ProblemData& data,
                            const std::vector<double>& x, const std::vector<double>& t, size_t n,
                            const std::vector<size_t>& steps, int rannacher) {
  CnRun run(cache, su, data, n);
  std::vector<cplx> out(x.size() * t.size());
  double now = 0.0;
  int startup = rannacher;
  for (size_t it = 0; it < t.size(); ++it) {
    double span = t[it] - now;
    size_t ns = steps[it];
    for (size_t s = 0; s < ns; ++s) {
      double dt = span / static_cast<double>(ns);
      double t0 = now + dt * static_cast<double>(s);
      if (startup > 0) {
        run.backward_euler(t0, 0.5 * dt);
        run.backward_euler(t0 + 0.5 * dt, 0.5 * dt);
        --startup;
      } else {
        run.cn_step(t0, dt);
      }
    }
    now = t[it];
    std::vector<cplx> u = run.nodes(now);
    for (size_t ix = 0; ix < x.size(); ++ix) out[ix * t.size() + it] = cubic_at(run.system(), u, x[ix]);
  }
  return out;
}

}  // namespace

SolutionField crank_nicolson(const DispersionCache& cache, const BoundaryConditions& bc, const ProblemData& data,
                             const std::vector<double>& x, const std::vector<double>& t, const CnOptions& opt) {
  Setup su = domain_setup(cache, bc, opt.window);
  for (double xv : x)
    if (xv < su.lo - 1e-12 || xv > su.hi + 1e-12) raise(ErrorKind::Argument, "output x outside the oracle grid");
  double prev = 0.0;
  for (double tv : t) {
    if (tv < prev) raise(ErrorKind::Argument, "output times must be ascending and non-negative");
    prev = tv;
  }
  const double h = (su.hi - su.lo) / static_cast<double>(opt.nx);
  const double dt = opt.dt > 0.0 ? opt.dt : h;
  std::vector<size_t> steps(t.size());
  prev = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    steps[i] = static_cast<size_t>(std::ceil((t[i] - prev) / dt - 1e-9));
    prev = t[i];
  }

  SolutionField field;
  field.x = x;
  field.t = t;
  field.q = cn_values(cache, su, data, x, t, opt.nx, steps, opt.rannacher_steps);
  if (opt.richardson) {
    std::vector<size_t> fine(steps);
    for (auto& s : fine) s *= 2;
    std::vector<cplx> qf = cn_values(cache, su, data, x, t, 2 * opt.nx, fine, opt.rannacher_steps);
    for (size_t i = 0; i < qf.size(); ++i) field.q[i] = (4.0 * qf[i] - field.q[i]) / 3.0;
  }
  field.diag.boundary_case = "oracle";
  return field;
}

std::vector<MatrixEigenvalue> matrix_eigs(const DispersionCache& cache, const BoundaryConditions& bc,
                                          const MatrixEigsOptions& opt) {
  if (bc.kind != DomainKind::FiniteInterval) raise(ErrorKind::Argument, "matrix_eigs needs a finite interval");
  Setup su = domain_setup(cache, bc, 0.0);
  auto eigs = [&](size_t n) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense_operator(assemble(cache, su, n)), false);
    if (es.info() != Eigen::Success) raise(ErrorKind::Oracle, "dense eigensolver failed");
    std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
      if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
      return a.imag() < b.imag();
    });
    return v;
  };

  const size_t n = opt.n_grid;
  std::vector<cplx> coarse = eigs(n);
  size_t keep = opt.keep > 0 ? std::min(opt.keep, coarse.size()) : coarse.size();
  std::vector<MatrixEigenvalue> out;
  out.reserve(keep);
  if (!opt.richardson) {
    for (size_t i = 0; i < keep; ++i) out.push_back({static_cast<int>(i), coarse[i], n, false});
    return out;
  }
  std::vector<cplx> fine = eigs(2 * n);
  for (size_t i = 0; i < keep; ++i) {
    cplx lc = coarse[i];
    auto best = std::min_element(fine.begin(), fine.end(),
                                 [&](cplx a, cplx b) { return std::abs(a - lc) < std::abs(b - lc); });
    out.push_back({static_cast<int>(i), (4.0 * *best - lc) / 3.0, 2 * n, true});
  }
  return out;
}

}  // namespace utm
