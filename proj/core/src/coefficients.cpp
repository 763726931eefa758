#include "utm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

namespace {

constexpr int kPanelOrder = 16;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx checked(const ScalarFn& f, double x, const char* what) {
  cplx v = f(x);
  if (!finite(v)) raise(ErrorKind::Evaluation, std::string(what) + " is not finite at x = " + std::to_string(x));
  return v;
}

// Integral of g over [a, b] split at the given breaks, 16-point Gauss per panel.
double integrate_abs(const std::function<double(double)>& g, const std::vector<double>& breaks, double a,
                     double b) {
  const GaussRule& rule = gauss_legendre(kPanelOrder);
  double total = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    double pa = std::max(a, breaks[i]), pb = std::min(b, breaks[i + 1]);
    if (!(pb > pa)) continue;
    double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    for (int j = 0; j < kPanelOrder; ++j) total += h * rule.w[j] * g(c + h * rule.x[j]);
  }
  return total;
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::WholeLine: return "whole_line";
    case DomainKind::HalfLine: return "half_line";
    case DomainKind::FiniteInterval: return "finite_interval";
  }
  return "unknown";
}

Domain Domain::finite(double a, double b) {
  Domain d;
  d.kind = DomainKind::FiniteInterval;
  d.xl = a;
  d.xr = b;
  d.validate();
  return d;
}

Domain Domain::half_line(double xl, double truncation) {
  Domain d;
  d.kind = DomainKind::HalfLine;
  d.xl = xl;
  d.xr = std::numeric_limits<double>::infinity();
  d.truncation = truncation;
  d.validate();
  return d;
}

Domain Domain::whole_line(double truncation) {
  Domain d;
  d.kind = DomainKind::WholeLine;
  d.xl = -std::numeric_limits<double>::infinity();
  d.xr = std::numeric_limits<double>::infinity();
  d.truncation = truncation;
  d.validate();
  return d;
}

void Domain::validate() const {
  if (kind == DomainKind::FiniteInterval && !(xl < xr && std::isfinite(xl) && std::isfinite(xr)))
    raise(ErrorKind::Argument, "domain: need finite x_l < x_r");
  if (kind == DomainKind::HalfLine && !std::isfinite(xl)) raise(ErrorKind::Argument, "domain: x_l must be finite");
  if (kind != DomainKind::FiniteInterval && truncation < 0.0)
    raise(ErrorKind::Argument, "domain: truncation extent must be positive");
}

cplx richardson_derivative(const ScalarFn& f, double x, double h) {
  auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

DispersionCache::DispersionCache(CoefficientProfile profile, Domain domain)
    : profile_(std::move(profile)), domain_(domain) {
  if (!profile_.alpha || !profile_.beta || !profile_.gamma)
    raise(ErrorKind::Argument, "coefficient profile needs alpha, beta and gamma");
  domain_.validate();
  choose_window();
  sample_phases();
  build_breaks();
  build_mfrak();
  compute_bounds();
}

cplx DispersionCache::alpha_prime(double x) const {
  return profile_.alpha_prime ? profile_.alpha_prime(x) : richardson_derivative(profile_.alpha, x);
}
cplx DispersionCache::beta_prime(double x) const {
  return profile_.beta_prime ? profile_.beta_prime(x) : richardson_derivative(profile_.beta, x);
}
cplx DispersionCache::gamma_prime(double x) const {
  if (gamma_constant_) return 0.0;
  return profile_.gamma_prime ? profile_.gamma_prime(x) : richardson_derivative(profile_.gamma, x);
}

cplx DispersionCache::rho(double x) const {
  cplx a = profile_.alpha(x), b = profile_.beta(x);
  return 0.5 * (beta_prime(x) / b - alpha_prime(x) / a);
}

void DispersionCache::choose_window() {
  if (domain_.kind == DomainKind::FiniteInterval) {
    lo_ = domain_.xl;
    hi_ = domain_.xr;
    anchor_ = lo_;
    return;
  }
  auto tail_density = [&](double x) {
    cplx a = checked(profile_.alpha, x, "alpha"), b = checked(profile_.beta, x, "beta");
    cplx r = 0.5 * (beta_prime(x) / b - alpha_prime(x) / a);
    cplx dg = profile_.gamma_prime ? profile_.gamma_prime(x) : richardson_derivative(profile_.gamma, x);
    return std::abs(r) + std::abs(dg);
  };
  double X = domain_.truncation;
  if (X <= 0.0) {
    X = 10.0;
    for (;;) {
      auto tail = [&](double from, double to) {
        std::vector<double> br;
        int m = std::max(8, static_cast<int>(std::ceil(std::abs(to - from) / 0.5)));
        for (int i = 0; i <= m; ++i) br.push_back(std::min(from, to) + std::abs(to - from) * i / m);
        return integrate_abs(tail_density, br, std::min(from, to), std::max(from, to));
      };
      double far = 4.0 * X;
      double mass = 0.0;
      if (domain_.kind == DomainKind::HalfLine) {
        mass = tail(domain_.xl + X, domain_.xl + X + far);
      } else {
        mass = tail(X, X + far) + tail(-X - far, -X);
      }
      if (mass < 1e-12) break;
      X *= 1.5;
      if (X > 2000.0) raise(ErrorKind::Truncation, "coefficient tails do not decay; set domain.truncation");
    }
  }
  if (domain_.kind == DomainKind::HalfLine) {
    lo_ = domain_.xl;
    hi_ = domain_.xl + X;
    anchor_ = lo_;
  } else {
    lo_ = -X;
    hi_ = X;
    anchor_ = 0.0;
  }
}

void DispersionCache::sample_phases() {
  size_t ns = 2048;
  for (;;) {
    sx_.resize(ns + 1);
    salpha_.resize(ns + 1);
    sbeta_.resize(ns + 1);
    double jump = 0.0;
    for (size_t i = 0; i <= ns; ++i) {
      double x = lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(ns);
      sx_[i] = x;
      salpha_[i] = checked(profile_.alpha, x, "alpha");
      sbeta_[i] = checked(profile_.beta, x, "beta");
      if (salpha_[i] == 0.0 || sbeta_[i] == 0.0) raise(ErrorKind::Evaluation, "alpha*beta vanishes");
      if (i > 0) {
        jump = std::max(jump, std::abs(std::arg(salpha_[i] / salpha_[i - 1])));
        jump = std::max(jump, std::abs(std::arg(sbeta_[i] / sbeta_[i - 1])));
      }
    }
    bounds_.max_phase_jump = jump;
    if (jump < 0.5 * pi || ns >= (1u << 20)) break;
    ns *= 2;
  }
  auto unwrap_all = [&](const std::vector<cplx>& v, std::vector<double>& th) {
    th.resize(v.size());
    th[0] = std::arg(v[0]);
    for (size_t i = 1; i < v.size(); ++i) th[i] = th[i - 1] + std::arg(v[i] / v[i - 1]);
  };
  unwrap_all(salpha_, stheta_a_);
  unwrap_all(sbeta_, stheta_b_);
  // Principal value at the anchor.
  double sa = std::arg(profile_.alpha(anchor_)) - theta_alpha(anchor_);
  double sb = std::arg(profile_.beta(anchor_)) - theta_beta(anchor_);
  for (auto& t : stheta_a_) t += sa;
  for (auto& t : stheta_b_) t += sb;

  gamma0_ = profile_.gamma(lo_);
  bool constant = true;
  for (size_t i = 0; i < sx_.size() && constant; i += 7) {
    cplx g = checked(profile_.gamma, sx_[i], "gamma");
    if (std::abs(g - gamma0_) > 1e-14 * std::max(1.0, std::abs(gamma0_))) constant = false;
  }
  gamma_constant_ = profile_.gamma_constant || constant;
}

double DispersionCache::unwrap(const std::vector<cplx>& vals, double x, double, const ScalarFn& f,
                               const std::vector<double>& theta) const {
  double t = (x - lo_) / (hi_ - lo_) * static_cast<double>(sx_.size() - 1);
  long j = std::lround(t);
  j = std::clamp<long>(j, 0, static_cast<long>(sx_.size()) - 1);
  return theta[j] + std::arg(f(x) / vals[j]);
}

double DispersionCache::theta_alpha(double x) const {
  return unwrap(salpha_, x, anchor_, profile_.alpha, stheta_a_);
}
double DispersionCache::theta_beta(double x) const {
  return unwrap(sbeta_, x, anchor_, profile_.beta, stheta_b_);
}

CoefficientPoint DispersionCache::at(double x) const {
  CoefficientPoint c;
  c.x = x;
  c.alpha = checked(profile_.alpha, x, "alpha");
  c.beta = checked(profile_.beta, x, "beta");
  c.gamma = gamma_constant_ ? gamma0_ : checked(profile_.gamma, x, "gamma");
  c.dgamma = gamma_prime(x);
  double ta = theta_alpha(x), tb = theta_beta(x);
  double aa = std::abs(c.alpha), bb = std::abs(c.beta);
  c.mu = std::polar(1.0 / std::sqrt(aa * bb), -0.5 * (ta + tb));
  c.sqrt_beta_mu = std::polar(std::pow(bb / aa, 0.25), 0.25 * (tb - ta));
  c.rho = 0.5 * (beta_prime(x) / c.beta - alpha_prime(x) / c.alpha);
  if (!finite(c.rho) || !finite(c.dgamma)) raise(ErrorKind::Evaluation, "coefficient derivative not finite");
  return c;
}

cplx DispersionCache::mu(double x) const { return at(x).mu; }

cplx DispersionCache::ufrak(double x) const {
  CoefficientPoint c = at(x);
  return 2.0 * c.rho / c.mu;
}

void DispersionCache::build_breaks() {
  const LegendrePanel& lp = legendre_panel(kPanelOrder);
  const double L = hi_ - lo_;
  // Global scales from the phase samples.
  double s_mu = 0.0, s_gamma = 0.0, s_rho = 0.0, s_dg = 0.0;
  for (size_t i = 0; i < sx_.size(); i += std::max<size_t>(1, sx_.size() / 512)) {
    CoefficientPoint c = at(sx_[i]);
    s_mu = std::max(s_mu, std::abs(c.mu));
    s_gamma = std::max(s_gamma, std::abs(c.gamma));
    s_rho = std::max(s_rho, std::abs(c.rho));
    s_dg = std::max(s_dg, std::abs(c.dgamma));
  }
  const bool exact_d = profile_.alpha_prime && profile_.beta_prime;
  const double tol_mu = 1e-13, tol_d = exact_d ? 1e-12 : 1e-9;
  const double min_width = 1e-6 * L;

  std::vector<double> start;
  double w0 = domain_.kind == DomainKind::FiniteInterval ? L / 4.0 : std::min(L / 4.0, 1.0);
  int m = std::max(1, static_cast<int>(std::ceil(L / w0 - 1e-9)));
  for (int i = 0; i <= m; ++i) start.push_back(lo_ + L * i / m);

  std::vector<double> out{lo_};
  std::vector<cplx> vmu(kPanelOrder), vg(kPanelOrder), vr(kPanelOrder), vd(kPanelOrder);
  std::function<void(double, double)> refine = [&](double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 0; j < kPanelOrder; ++j) {
      CoefficientPoint p = at(c + h * lp.t[j]);
      vmu[j] = p.mu;
      vg[j] = p.gamma;
      vr[j] = p.rho;
      vd[j] = p.dgamma;
    }
    bool ok = legendre_tail(lp, vmu.data()) <= tol_mu * s_mu + 1e-300 &&
              legendre_tail(lp, vg.data()) <= tol_mu * s_gamma + 1e-300 &&
              legendre_tail(lp, vr.data()) <= tol_d * s_rho + 1e-300 &&
              legendre_tail(lp, vd.data()) <= tol_d * s_dg + 1e-300;
    if (ok || b - a <= min_width) {
      out.push_back(b);
      return;
    }
    refine(a, c);
    refine(c, b);
  };
  for (size_t i = 0; i + 1 < start.size(); ++i) refine(start[i], start[i + 1]);
  breaks_ = out;
}

void DispersionCache::build_mfrak() {
  const LegendrePanel& lp = legendre_panel(kPanelOrder);
  const size_t P = breaks_.size() - 1;
  mu_nodes_.assign(P * kPanelOrder, 0.0);
  mfrak_breaks_.assign(P + 1, 0.0);
  for (size_t i = 0; i < P; ++i) {
    double a = breaks_[i], b = breaks_[i + 1];
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx s = 0.0;
    for (int j = 0; j < kPanelOrder; ++j) {
      mu_nodes_[i * kPanelOrder + j] = mu(c + h * lp.t[j]);
      s += h * lp.w[j] * mu_nodes_[i * kPanelOrder + j];
    }
    mfrak_breaks_[i + 1] = mfrak_breaks_[i] + s;
  }
  if (anchor_ != lo_) {
    cplx shift = mfrak(anchor_);
    for (auto& v : mfrak_breaks_) v -= shift;
  }
}

cplx DispersionCache::mfrak(double x) const {
  if (x < lo_ - 1e-12 * (hi_ - lo_) || x > hi_ + 1e-12 * (hi_ - lo_))
    raise(ErrorKind::Coverage, "mfrak: x outside the computational window");
  const LegendrePanel& lp = legendre_panel(kPanelOrder);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  size_t i = it == breaks_.begin() ? 0 : static_cast<size_t>(it - breaks_.begin()) - 1;
  i = std::min(i, breaks_.size() - 2);
  double a = breaks_[i], b = breaks_[i + 1];
  double tau = std::clamp((2.0 * x - a - b) / (b - a), -1.0, 1.0);
  auto row = lp.integral_row(tau);
  cplx s = 0.0;
  for (int j = 0; j < kPanelOrder; ++j) s += row[j] * mu_nodes_[i * kPanelOrder + j];
  return mfrak_breaks_[i] + 0.5 * (b - a) * s;
}

void DispersionCache::compute_bounds() {
  double gsup = 0.0, abinf = std::numeric_limits<double>::infinity(), absup = 0.0, theta = 0.0;
  for (size_t i = 0; i < sx_.size(); ++i) {
    cplx ab = salpha_[i] * sbeta_[i];
    abinf = std::min(abinf, std::abs(ab));
    absup = std::max(absup, std::abs(ab));
    theta = std::max(theta, std::abs(stheta_a_[i] + stheta_b_[i]));
    gsup = std::max(gsup, std::abs(gamma_constant_ ? gamma0_ : profile_.gamma(sx_[i])));
  }
  bounds_.gamma_sup_measured = gsup;
  bounds_.M_gamma = 1.1 * gsup;
  bounds_.m_ab = abinf / 1.1;
  bounds_.M_ab = 1.1 * absup;
  bounds_.Theta_measured = theta;
  bounds_.Theta = theta < 0.5 * pi ? std::min(1.1 * theta, 0.5 * (theta + 0.5 * pi)) : theta;
  bounds_.l1_rho = integrate_abs([&](double x) { return std::abs(rho(x)); }, breaks_, lo_, hi_);
  bounds_.l1_dgamma = gamma_constant_
                          ? 0.0
                          : integrate_abs([&](double x) { return std::abs(gamma_prime(x)); }, breaks_, lo_, hi_);
}

Dispersion DispersionCache::dispersion(cplx k, double x) const {
  if (!(std::abs(k) > std::sqrt(bounds_.gamma_sup_measured)))
    raise(ErrorKind::ContourRadius, "dispersion: |k| must exceed sqrt(M_gamma)");
  CoefficientPoint c = at(x);
  Dispersion d;
  d.mu = c.mu;
  d.g = std::sqrt(1.0 + c.gamma / (k * k));
  d.n = c.mu * d.g;
  d.beta_n = c.beta * d.n;
  d.sqrt_beta_n = c.sqrt_beta_mu * std::sqrt(d.g);
  return d;
}

double DispersionCache::l1_eta_bound(double r, double a, double b) const {
  double denom = 2.0 * (r * r - bounds_.gamma_sup_measured);
  double lr = integrate_abs([&](double x) { return std::abs(rho(x)); }, breaks_, a, b);
  if (gamma_constant_) return lr;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  double ld = integrate_abs([&](double x) { return std::abs(gamma_prime(x)); }, breaks_, a, b);
  return lr + ld / denom;
}

bool ValidationReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.passed; });
}

const ValidationItem* ValidationReport::find(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return &i;
  return nullptr;
}

ValidationReport validate_assumptions(const DispersionCache& cache) {
  const Bounds& b = cache.bounds();
  ValidationReport rep;
  rep.items.push_back({"dissipativity", b.Theta_measured < 0.5 * pi, b.Theta_measured,
                       "sup |arg(alpha beta)| < pi/2"});
  rep.items.push_back({"branch_continuity", b.max_phase_jump < 0.5 * pi, b.max_phase_jump,
                       "sampled phase jumps of alpha, beta below pi/2"});
  rep.items.push_back({"lower_bound", b.m_ab > 0.0, b.m_ab * 1.1, "inf |alpha beta| > 0"});
  rep.items.push_back({"gamma_bounded", std::isfinite(b.gamma_sup_measured), b.gamma_sup_measured,
                       "sup |gamma| finite"});
  rep.items.push_back({"l1_rho", std::isfinite(b.l1_rho), b.l1_rho, "||beta'/beta - alpha'/alpha||_1 / 2 finite"});
  rep.items.push_back({"l1_gamma_prime", std::isfinite(b.l1_dgamma), b.l1_dgamma, "||gamma'||_1 finite"});
  return rep;
}

ValidationItem check_u_smoothness(const DispersionCache& cache) {
  // u' from differences of u on a uniform grid; a jump shows up as a
  // difference quotient far above its neighbours.
  const int n = 512;
  const double a = cache.lo(), b = cache.hi(), h = (b - a) / n;
  std::vector<cplx> u(n + 1);
  for (int i = 0; i <= n; ++i) u[i] = cache.ufrak(a + h * i);
  double worst = 0.0, scale = 0.0;
  std::vector<cplx> du(n);
  for (int i = 0; i < n; ++i) {
    du[i] = (u[i + 1] - u[i]) / h;
    scale = std::max(scale, std::abs(du[i]));
  }
  for (int i = 1; i < n; ++i) worst = std::max(worst, std::abs(du[i] - du[i - 1]));
  double measured = worst / (scale + 1e-300);
  return {"u_smoothness", !(measured > 0.25) && std::isfinite(measured), measured,
          "u' continuous (relative jump of difference quotients)"};
}

ContourAngles contour_angles(double Theta) {
  ContourAngles c;
  c.theta1 = 0.25 * (Theta + 0.5 * pi);
  c.theta0 = 0.5 * (c.theta1 + 0.25 * pi);
  return c;
}

ContourParams contour_params(const DispersionCache& cache, double safety) {
  const Bounds& b = cache.bounds();
  if (!(b.Theta_measured < 0.5 * pi)) raise(ErrorKind::Dissipativity, "sup |arg(alpha beta)| >= pi/2");
  if (safety < 2.0) raise(ErrorKind::Argument, "contour safety factor must be >= 2");
  ContourAngles ang = contour_angles(b.Theta);
  ContourParams p;
  p.theta0 = ang.theta0;
  p.theta1 = ang.theta1;
  p.r = safety * std::sqrt(b.M_gamma + 1.0);
  double r_arg = std::sqrt(4.0 * b.M_gamma / (0.5 * pi - b.Theta));
  p.r = std::max(p.r, 1.0001 * r_arg);
  p.m_n = std::sqrt(1.0 - b.M_gamma / (p.r * p.r)) / std::sqrt(b.M_ab);
  p.M_n = std::sqrt(1.0 + b.M_gamma / (p.r * p.r)) / std::sqrt(b.m_ab);
  p.m_in = p.m_n * std::sin(p.theta0 - p.theta1);
  return p;
}

}  // namespace utm
