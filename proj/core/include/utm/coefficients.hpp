#pragma once

#include <string>
#include <vector>

#include "utm/types.hpp"

namespace utm {

enum class DomainKind { WholeLine, HalfLine, FiniteInterval };

std::string to_string(DomainKind kind);

struct Domain {
  DomainKind kind = DomainKind::FiniteInterval;
  double xl = 0.0;
  double xr = 1.0;
  // Unbounded kinds: window length beyond xl (half line) or half-width (whole
  // line). Zero selects it from the coefficient tails.
  double truncation = 0.0;

  static Domain finite(double a, double b);
  static Domain half_line(double xl, double truncation = 0.0);
  static Domain whole_line(double truncation = 0.0);
  void validate() const;
};

struct CoefficientProfile {
  ScalarFn alpha;
  ScalarFn beta;
  ScalarFn gamma;
  ScalarFn alpha_prime;  // empty: Richardson central differences
  ScalarFn beta_prime;
  ScalarFn gamma_prime;
  bool gamma_constant = false;  // declared by presets; detected otherwise
  std::string name = "custom";
};

// Fourth-order central difference (two-level Richardson on step h).
cplx richardson_derivative(const ScalarFn& f, double x, double h = 1e-5);

// Coefficient data at one point. rho = (beta mu)'/(beta mu) = (beta'/beta - alpha'/alpha)/2.
struct CoefficientPoint {
  double x = 0.0;
  cplx alpha, beta, gamma, dgamma;
  cplx mu;
  cplx sqrt_beta_mu;
  cplx rho;
};

struct Bounds {
  double M_gamma = 0.0;     // sup |gamma| (with margin)
  double m_ab = 0.0;        // inf |alpha beta| (with margin)
  double M_ab = 0.0;        // sup |alpha beta| (with margin)
  double Theta = 0.0;       // sup |arg(alpha beta)| (with margin, capped below pi/2)
  double Theta_measured = 0.0;
  double gamma_sup_measured = 0.0;
  double l1_rho = 0.0;      // || (beta'/beta - alpha'/alpha)/2 ||_1
  double l1_dgamma = 0.0;   // || gamma' ||_1
  double max_phase_jump = 0.0;
};

struct Dispersion {
  cplx mu, g, n, beta_n, sqrt_beta_n;
};

class DispersionCache {
 public:
  DispersionCache(CoefficientProfile profile, Domain domain);

  const CoefficientProfile& profile() const { return profile_; }
  const Domain& domain() const { return domain_; }
  // Computational window (truncated for unbounded kinds).
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const Bounds& bounds() const { return bounds_; }
  bool gamma_constant() const { return gamma_constant_; }
  cplx gamma_value() const { return gamma0_; }
  // Panels resolving mu, rho, gamma, gamma' with 16-point Legendre tails.
  const std::vector<double>& breaks() const { return breaks_; }

  double theta_alpha(double x) const;
  double theta_beta(double x) const;
  CoefficientPoint at(double x) const;
  cplx mu(double x) const;
  cplx mfrak(double x) const;  // integral of mu from the anchor (lo, or 0 on the whole line)
  cplx ufrak(double x) const;
  cplx rho(double x) const;
  Dispersion dispersion(cplx k, double x) const;

  // ||(beta n)'/(beta n)||_1 bound over [a, b] for |k| >= r.
  double l1_eta_bound(double r, double a, double b) const;
  double l1_eta_bound(double r) const { return l1_eta_bound(r, lo_, hi_); }

  cplx alpha_prime(double x) const;
  cplx beta_prime(double x) const;
  cplx gamma_prime(double x) const;

 private:
  void choose_window();
  void sample_phases();
  void build_breaks();
  void build_mfrak();
  void compute_bounds();
  double unwrap(const std::vector<cplx>& vals, double x, double anchor_x, const ScalarFn& f,
                const std::vector<double>& theta) const;

  CoefficientProfile profile_;
  Domain domain_;
  double lo_ = 0.0, hi_ = 1.0;
  double anchor_ = 0.0;
  bool gamma_constant_ = false;
  cplx gamma0_ = 0.0;
  std::vector<double> sx_;
  std::vector<cplx> salpha_, sbeta_;
  std::vector<double> stheta_a_, stheta_b_;
  std::vector<double> breaks_;
  std::vector<cplx> mfrak_breaks_;
  std::vector<cplx> mu_nodes_;
  Bounds bounds_;
};

struct ValidationItem {
  std::string name;
  bool passed = true;
  double measured = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool ok() const;
  const ValidationItem* find(const std::string& name) const;
};

ValidationReport validate_assumptions(const DispersionCache& cache);
// Finite-difference continuity of u' (needed by boundary case 4).
ValidationItem check_u_smoothness(const DispersionCache& cache);

struct ContourParams {
  double r = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;
  double m_n = 0.0;
  double M_n = 0.0;
  double m_in = 0.0;
};

struct ContourAngles {
  double theta1, theta0;
};
ContourAngles contour_angles(double Theta);
ContourParams contour_params(const DispersionCache& cache, double safety = 2.0);

}  // namespace utm
