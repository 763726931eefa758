#include "utm/contour.hpp"

#include <algorithm>
#include <cmath>

#include "utm/errors.hpp"
#include "utm/quadrature.hpp"

namespace utm {

namespace {

constexpr int kPanelNodes = 16;
constexpr int kArcPanels = 4;  // 64 nodes minimum

}  // namespace

size_t ContourSpec::count(Segment s) const { return static_cast<size_t>(std::count(segments.begin(), segments.end(), s)); }

double solve_kmax(double theta0, double t_min, double tol, double r) {
  // exp(-K^2 cos(2 theta0) t_min) K^2 = tol, solved for u = K^2 by Newton.
  const double c = std::cos(2.0 * theta0) * t_min;
  if (!(c > 0.0)) raise(ErrorKind::Argument, "contour angle must be below pi/4");
  double u = std::max(-std::log(tol) / c, r * r);
  for (int it = 0; it < 100; ++it) {
    double g = -u * c + std::log(u) - std::log(tol);
    double dg = -c + 1.0 / u;
    double un = u - g / dg;
    if (un <= 0.0) un = 0.5 * u;
    if (std::abs(un - u) <= 1e-14 * u) {
      u = un;
      break;
    }
    u = un;
  }
  return std::max(std::sqrt(u), 2.0 * r);
}

ContourSpec build_contour(const DispersionCache& cache, double t_min, double tol, const ContourOptions& opt) {
  if (!(t_min > 0.0)) raise(ErrorKind::Argument, "t_min must be positive");
  if (!(tol > 0.0 && tol < 1.0)) raise(ErrorKind::Argument, "contour tolerance must lie in (0, 1)");
  ContourParams cp = contour_params(cache, opt.safety);
  ContourSpec out;
  out.r = cp.r;
  if (opt.radius) {
    if (*opt.radius < cp.r) raise(ErrorKind::ContourRadius, "contour radius below the admissible minimum");
    out.r = *opt.radius;
  }
  out.theta0 = cp.theta0;
  if (opt.theta0) {
    if (*opt.theta0 < cp.theta1 || *opt.theta0 >= 0.25 * pi)
      raise(ErrorKind::Argument, "theta0 override outside [theta1, pi/4)");
    out.theta0 = *opt.theta0;
  }
  const double r = out.r, th = out.theta0;
  out.K_max = solve_kmax(th, t_min, tol, r);
  const double K = out.K_max;
  const double t_max = std::max(opt.t_max, t_min);
  const double span = 2.0 * (cache.hi() - cache.lo());
  const double Mn = cp.M_n;
  // Decay rate of exp(i k int n) per unit |k| and distance along the rays.
  const Bounds& bd = cache.bounds();
  const double g_arg = 0.5 * std::asin(std::min(1.0, bd.M_gamma / (r * r)));
  const double m_dec = std::max({cp.m_in, cp.m_n * std::sin(th - 0.5 * bd.Theta_measured - g_arg), 1e-3});
  const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);

  // Phase rate along a ray at radius rho; exp(-k^2 t) only matters while
  // rho^2 t cos(2 theta0) stays below ~37.
  auto rate = [&](double rho) {
    double d = std::min(span, 46.0 / (m_dec * rho));
    double t_eff = std::min(t_max, 37.0 / (rho * rho * c2));
    return 2.0 * rho * t_eff * s2 + Mn * d + 1e-300;
  };
  auto width = [&](double rho) {
    double w = std::min(std::max(0.5 * r, 0.25 * rho), 2.0 * pi / rate(rho));
    return w * opt.refine;
  };
  std::vector<double> ray;  // panel ends from r to K
  ray.push_back(r);
  while (ray.back() < K) {
    double rho = ray.back();
    double w = width(rho);
    w = std::min(w, width(rho + w));
    double nxt = rho + w;
    if (nxt > K - 1e-3 * w) nxt = K;
    ray.push_back(nxt);
    if (ray.size() * kPanelNodes * 2 > opt.max_nodes) break;
  }
  const GaussRule& g = gauss_legendre(kPanelNodes);
  size_t ray_nodes = (ray.size() - 1) * kPanelNodes;

  const double A = pi - 2.0 * th;
  double arc_rate = r * (2.0 * r * t_max + Mn * std::min(span, 46.0 / (m_dec * r)));
  int arc_panels = std::max(kArcPanels, static_cast<int>(std::ceil(A * arc_rate / (2.0 * pi) / opt.refine)));
  size_t total = 2 * ray_nodes + static_cast<size_t>(arc_panels) * kPanelNodes;
  if (total > opt.max_nodes || ray.back() < K) {
    double factor = static_cast<double>(std::max(total, 2 * opt.max_nodes)) / static_cast<double>(opt.max_nodes);
    raise(ErrorKind::Budget, "contour needs more than " + std::to_string(opt.max_nodes) +
                                 " nodes; try t_min >= " + std::to_string(t_min * factor * factor));
  }

  const cplx eL = std::polar(1.0, pi - th), eR = std::polar(1.0, th);
  // Left ray, inward: rho from K down to r.
  for (size_t p = ray.size() - 1; p-- > 0;) {
    double a = ray[p], b = ray[p + 1], c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = kPanelNodes - 1; j >= 0; --j) {
      double rho = c + h * g.x[j];
      out.nodes.push_back(rho * eL);
      out.weights.push_back(-h * g.w[j] * eL);
      out.segments.push_back(Segment::LeftRay);
    }
  }
  // Arc, clockwise: theta from pi - theta0 down to theta0.
  const double dth = A / arc_panels;
  for (int p = 0; p < arc_panels; ++p) {
    double hi = pi - th - p * dth, c = hi - 0.5 * dth, h = 0.5 * dth;
    for (int j = kPanelNodes - 1; j >= 0; --j) {
      double ang = c + h * g.x[j];
      cplx kk = std::polar(r, ang);
      out.nodes.push_back(kk);
      out.weights.push_back(-h * g.w[j] * I * kk);
      out.segments.push_back(Segment::Arc);
    }
  }
  // Right ray, outward.
  for (size_t p = 0; p + 1 < ray.size(); ++p) {
    double a = ray[p], b = ray[p + 1], c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 0; j < kPanelNodes; ++j) {
      double rho = c + h * g.x[j];
      out.nodes.push_back(rho * eR);
      out.weights.push_back(h * g.w[j] * eR);
      out.segments.push_back(Segment::RightRay);
    }
  }
  return out;
}

}  // namespace utm
