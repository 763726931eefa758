// Regenerates the frozen reference data under tests/fixtures.
//   utm_fixtures <dir> [--with-utm-solve]

#include <cstring>
#include <iostream>

#include "json.hpp"
#include "utm/oracle.hpp"
#include "utm/presets.hpp"
#include "utm_cli/commands.hpp"
#include "utm_cli/emit.hpp"

using namespace utm;
using namespace utm::cli;

namespace {

SolutionField field_of(const std::vector<double>& x, const std::vector<double>& t, std::vector<cplx> q) {
  SolutionField f;
  f.x = x;
  f.t = t;
  f.q = std::move(q);
  return f;
}

std::string eigs_json(const std::vector<MatrixEigenvalue>& ev) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : ev)
    arr.push_back({{"m", e.m},
                   {"lambda_re", e.lambda.real()},
                   {"lambda_im", e.lambda.imag()},
                   {"grid", e.grid},
                   {"extrapolated", e.extrapolated}});
  return arr.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: utm_fixtures <dir> [--with-utm-solve <config>]\n";
    return 2;
  }
  const std::string dir = argv[1];
  const Domain unit = Domain::finite(0.0, 1.0);
  const auto x21 = linspace(0.0, 1.0, 21), t5 = linspace(0.05, 0.5, 5);

  {
    DispersionCache cache(make_preset("constant"), unit);
    auto bc = BoundaryConditions::finite({1, 0, 0, 0}, {0, 0, 1, 0});
    ScalarFn q0 = [](double x) { return cplx(std::sin(pi * x)); };
    std::vector<cplx> q(x21.size() * t5.size());
    for (size_t it = 0; it < t5.size(); ++it) {
      auto col = fourier_exact(cache, bc, q0, x21, t5[it]);
      for (size_t ix = 0; ix < x21.size(); ++ix) q[ix * t5.size() + it] = col[ix];
    }
    write_file(dir, "heat_dirichlet_fourier.csv", solution_csv(field_of(x21, t5, q)));

    MatrixEigsOptions mo;
    mo.n_grid = 200;
    mo.keep = 8;
    write_file(dir, "dirichlet_matrix_eigs.json", eigs_json(matrix_eigs(cache, bc, mo)));
  }
  {
    DispersionCache cache(make_preset("gaussian_bump"), unit);
    auto bc = BoundaryConditions::finite({-1, 1, 0, 0}, {0, 0, 1, 1});
    ProblemData d;
    d.q0 = [](double x) { return cplx(std::exp(-20.0 * (x - 0.4) * (x - 0.4))); };
    CnOptions o;
    o.nx = 512;
    write_file(dir, "robin_bump_cn.csv", solution_csv(crank_nicolson(cache, bc, d, x21, t5, o)));
  }
  {
    DispersionCache cache(make_preset("constant"), Domain::whole_line());
    ScalarFn q0 = [](double x) { return cplx(std::exp(-x * x)); };
    auto x = linspace(-2.0, 2.0, 11), t = linspace(0.1, 0.5, 3);
    std::vector<cplx> q;
    for (double xi : x)
      for (double ti : t) q.push_back(heat_kernel_convolution(cache, q0, xi, ti));
    write_file(dir, "whole_line_gaussian_kernel.csv", solution_csv(field_of(x, t, q)));
  }
  {
    auto x = linspace(0.1, 1.9, 10), t = std::vector<double>{0.3};
    std::vector<cplx> q;
    for (double xi : x) q.push_back(erfc_solution(xi, 0.3));
    write_file(dir, "half_line_erfc.csv", solution_csv(field_of(x, t, q)));
  }
  {
    DispersionCache cache(make_preset("cgl"), unit);
    auto bc = BoundaryConditions::finite({1, 0, -1, 0}, {0, 1, 0, -1});
    MatrixEigsOptions mo;
    mo.n_grid = 400;
    mo.keep = 5;
    write_file(dir, "cgl_matrix_eigs.json", eigs_json(matrix_eigs(cache, bc, mo)));
  }
  if (argc >= 4 && std::strcmp(argv[2], "--with-utm-solve") == 0) {
    ProblemConfig c = parse_config(argv[3]);
    RunOptions ro;
    ro.command = "solve";
    write_file(dir, "heat_dirichlet_solution.csv", run_command(ro, c).primary);
  }
  return 0;
}
