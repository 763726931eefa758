#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "utm/coefficients.hpp"
#include "utm/delta.hpp"
#include "utm/errors.hpp"
#include "utm/kernels.hpp"
#include "utm/solver.hpp"
#include "utm_cli/expression.hpp"

namespace utm::cli {

class ConfigError : public Error {
 public:
  // line and column are 1-based; zero when unknown.
  ConfigError(std::string path, const std::string& message, int line = 0, int column = 0, std::string file = {});
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string path_;
  int line_, column_;
};

struct GridSpec {
  size_t nx = 21, nt = 5;
  double xa = 0.0, xb = 1.0, ta = 0.05, tb = 0.5;

  std::vector<double> xs() const;
  std::vector<double> ts() const;
};

// "nx,nt,xa,xb,ta,tb"
GridSpec parse_grid(const std::string& text);

struct CoefficientSpec {
  std::string mode = "preset";  // preset | expression | samples
  std::string preset;
  std::map<std::string, cplx> params;
  std::optional<Expression> alpha, beta, gamma, alpha_prime, beta_prime, gamma_prime;
  // samples mode: uniform nodes x0 + j dx
  double x0 = 0.0, dx = 0.0;
  std::vector<cplx> alpha_samples, beta_samples, gamma_samples;
};

struct DataSpec {
  std::optional<Expression> q0, f, f_t, f0, f1;
  std::vector<double> breaks;
};

inline constexpr int kMaxEigenOrder = 8;

struct EigenSettings {
  int count = 5;
  int nmax = 2;
  double newton_tol = 1e-14;
  double residual_threshold = 1e-6;
};

struct OracleSettings {
  std::string kind;  // cn | fourier | kernel; empty picks by domain
  size_t nx = 512;
  double dt = 0.0;
  bool richardson = true;
  double window = 0.0;
};

struct IdentitySettings {
  unsigned seed = 1;
  int samples = 6;
  int N = 6;
};

struct ProblemConfig {
  std::string file;
  Domain domain;
  CoefficientSpec coefficients;
  BoundaryConditions bc;
  DataSpec data;
  SolveOptions solve;
  EigenSettings eigen;
  OracleSettings oracle;
  IdentitySettings identities;
  GridSpec grid;
  std::string out_dir;

  CoefficientProfile profile() const;
  ProblemData problem_data() const;
};

ProblemConfig parse_config_text(const std::string& text, const std::string& file = "<string>");
ProblemConfig parse_config(const std::string& path);

}  // namespace utm::cli
