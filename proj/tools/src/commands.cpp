#include "utm_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "utm/eigen.hpp"
#include "utm/identities.hpp"
#include "utm/oracle.hpp"
#include "utm_cli/emit.hpp"

namespace utm::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

GridSpec grid_of(const RunOptions& opt, const ProblemConfig& c) { return opt.grid ? *opt.grid : c.grid; }

CommandResult validate(const RunOptions& opt, const ProblemConfig& c) {
  DispersionCache cache(c.profile(), c.domain);
  Json j;
  j["command"] = "validate";
  j["domain"] = to_string(c.domain.kind);
  j["window"] = Json::array({cache.lo(), cache.hi()});
  ValidationReport rep = validate_assumptions(cache);
  bool ok = rep.ok();
  Json items = Json::array();
  for (const auto& it : rep.items)
    items.push_back({{"name", it.name}, {"passed", it.passed}, {"measured", it.measured}, {"detail", it.detail}});
  j["assumptions"] = items;
  const Bounds& b = cache.bounds();
  j["bounds"] = {{"M_gamma", b.M_gamma}, {"m_ab", b.m_ab},         {"M_ab", b.M_ab},
                 {"Theta", b.Theta},     {"l1_rho", b.l1_rho},     {"l1_dgamma", b.l1_dgamma}};
  ContourParams cp = contour_params(cache, c.solve.safety);
  j["contour"] = {{"r", cp.r}, {"theta0", cp.theta0}, {"theta1", cp.theta1}};
  if (c.bc.kind == DomainKind::FiniteInterval) {
    BoundaryCase bcase = classify(c.bc, cache);
    j["boundary_case"] = {{"id", to_string(bcase.id)}, {"regular", bcase.regular}, {"note", bcase.note}};
    if (bcase.id == CaseId::Unsupported) ok = false;
    if (bcase.id == CaseId::Case4) {
      ValidationItem u = check_u_smoothness(cache);
      j["u_smoothness"] = {{"passed", u.passed}, {"measured", u.measured}, {"detail", u.detail}};
      ok = ok && u.passed;
    }
  }
  DataCheck dc = check_data(c.problem_data(), cache, std::max(grid_of(opt, c).tb, c.solve.t_min));
  j["data"] = {{"ok", dc.ok}, {"q0_l1", dc.q0_l1}, {"f_sup", dc.f_sup}, {"message", dc.message}};
  ok = ok && dc.ok;
  j["ok"] = ok;
  CommandResult r;
  r.exit_code = ok ? 0 : 1;
  r.primary = dump(j);
  r.files["validate.json"] = r.primary;
  return r;
}

SolutionField solve_field(const ProblemConfig& c, const DispersionCache& cache, const GridSpec& g) {
  if (g.nx == 0 || g.nt == 0) {
    SolutionField f;
    f.x = g.xs();
    f.t = g.ts();
    return f;
  }
  return solve_q(cache, c.bc, c.problem_data(), g.xs(), g.ts(), c.solve);
}

Json diagnostics(const SolveDiagnostics& d) {
  return {{"nodes", d.nodes},
          {"r", d.r},
          {"theta0", d.theta0},
          {"K_max", d.K_max},
          {"N", d.N},
          {"max_level", d.max_level},
          {"boundary_case", d.boundary_case},
          {"regular", d.regular},
          {"warnings", d.warnings}};
}

CommandResult solve(const RunOptions& opt, const ProblemConfig& c) {
  DispersionCache cache(c.profile(), c.domain);
  SolutionField f = solve_field(c, cache, grid_of(opt, c));
  CommandResult r;
  r.primary = solution_csv(f);
  r.files["solution.csv"] = r.primary;
  r.files["solve.json"] = dump(diagnostics(f.diag));
  return r;
}

CommandResult eigs(const RunOptions& opt, const ProblemConfig& c) {
  if (c.domain.kind != DomainKind::FiniteInterval) raise(ErrorKind::Argument, "eigs needs a finite interval");
  const int count = opt.count.value_or(c.eigen.count);
  const int N = opt.nmax.value_or(c.eigen.nmax);
  if (count < 1) raise(ErrorKind::Argument, "--count must be at least 1");
  if (N < 0 || N > kMaxEigenOrder)
    raise(ErrorKind::Argument, "--nmax must lie in 0.." + std::to_string(kMaxEigenOrder));
  DispersionCache cache(c.profile(), c.domain);
  SearchRegion region = default_region(cache, count);
  EigenOptions eo;
  eo.newton_tol = c.eigen.newton_tol;
  auto pairs = find_eigenvalues(c.bc, cache, region, N, eo);
  auto records = eigen_records(pairs, static_cast<size_t>(count));
  CommandResult r;
  r.primary = eigen_json(records);
  r.files["eigs.json"] = r.primary;
  if (records.size() < static_cast<size_t>(count)) {
    r.exit_code = 1;
    r.files["eigs_error.json"] = dump({{"error",
                                        {{"kind", "RootIsolationError"},
                                         {"message", "found " + std::to_string(records.size()) + " of " +
                                                         std::to_string(count) + " eigenvalues"}}}});
  }
  return r;
}

CommandResult identities(const RunOptions& opt, const ProblemConfig& c) {
  DispersionCache cache(c.profile(), c.domain);
  IdentityOptions io;
  io.seed = opt.seed.value_or(c.identities.seed);
  io.samples = c.identities.samples;
  io.N = c.identities.N;
  IdentityReport rep = run_identities(cache, c.bc, io);
  Json checks = Json::array();
  for (const auto& ch : rep.checks)
    checks.push_back({{"name", ch.name},
                      {"passed", ch.passed},
                      {"measured", ch.measured},
                      {"threshold", ch.threshold},
                      {"detail", ch.detail}});
  Json j;
  j["command"] = "identities";
  j["seed"] = io.seed;
  j["ok"] = rep.ok();
  j["checks"] = checks;
  CommandResult r;
  r.exit_code = rep.ok() ? 0 : 1;
  r.primary = dump(j);
  r.files["identities.json"] = r.primary;
  return r;
}

std::vector<cplx> oracle_values(const std::string& kind, const ProblemConfig& c, const DispersionCache& cache,
                                const SolutionField& f) {
  const ProblemData data = c.problem_data();
  std::vector<cplx> out(f.nx() * f.nt());
  if (kind == "cn") {
    CnOptions o;
    o.nx = c.oracle.nx;
    o.dt = c.oracle.dt;
    o.richardson = c.oracle.richardson;
    o.window = c.oracle.window;
    return crank_nicolson(cache, c.bc, data, f.x, f.t, o).q;
  }
  if (data.has_f() || data.has_boundary(0) || data.has_boundary(1))
    raise(ErrorKind::Oracle, kind + " oracle takes initial data only");
  if (!data.has_q0()) raise(ErrorKind::Oracle, kind + " oracle needs q0");
  if (kind == "fourier") {
    for (size_t it = 0; it < f.nt(); ++it) {
      auto col = fourier_exact(cache, c.bc, data.q0, f.x, f.t[it]);
      for (size_t ix = 0; ix < f.nx(); ++ix) out[ix * f.nt() + it] = col[ix];
    }
    return out;
  }
  if (c.domain.kind != DomainKind::WholeLine) raise(ErrorKind::Oracle, "kernel oracle needs the whole line");
  for (size_t ix = 0; ix < f.nx(); ++ix)
    for (size_t it = 0; it < f.nt(); ++it)
      out[ix * f.nt() + it] = heat_kernel_convolution(cache, data.q0, f.x[ix], f.t[it], data.breaks);
  return out;
}

CommandResult compare(const RunOptions& opt, const ProblemConfig& c) {
  std::string kind = !opt.oracle.empty() ? opt.oracle : c.oracle.kind;
  if (kind.empty()) kind = c.domain.kind == DomainKind::WholeLine ? "kernel" : "cn";
  if (kind != "cn" && kind != "fourier" && kind != "kernel")
    raise(ErrorKind::Argument, "--oracle must be cn, fourier or kernel");
  DispersionCache cache(c.profile(), c.domain);
  SolutionField f = solve_field(c, cache, grid_of(opt, c));
  std::vector<cplx> ref = f.q.empty() ? std::vector<cplx>{} : oracle_values(kind, c, cache, f);
  double max_abs = 0.0, scale = 0.0;
  std::ostringstream csv;
  csv << "x,t,re_utm,im_utm,re_oracle,im_oracle,abs_err\n";
  for (size_t ix = 0; ix < f.nx(); ++ix)
    for (size_t it = 0; it < f.nt(); ++it) {
      const size_t i = ix * f.nt() + it;
      const double e = std::abs(f.q[i] - ref[i]);
      max_abs = std::max(max_abs, e);
      scale = std::max(scale, std::abs(ref[i]));
      csv << format_real(f.x[ix]) << ',' << format_real(f.t[it]) << ',' << format_real(f.q[i].real()) << ','
          << format_real(f.q[i].imag()) << ',' << format_real(ref[i].real()) << ',' << format_real(ref[i].imag())
          << ',' << format_real(e) << '\n';
    }
  Json j;
  j["command"] = "compare";
  j["oracle"] = kind;
  j["points"] = f.nx() * f.nt();
  j["max_abs_error"] = max_abs;
  j["max_rel_error"] = scale > 0.0 ? max_abs / scale : 0.0;
  j["oracle_scale"] = scale;
  j["solve"] = diagnostics(f.diag);
  CommandResult r;
  r.primary = csv.str();
  r.files["compare.csv"] = r.primary;
  r.files["compare.json"] = dump(j);
  return r;
}

int exit_code_for(const std::exception& e) {
  if (auto* u = dynamic_cast<const Error*>(&e))
    return u->kind() == ErrorKind::Config || u->kind() == ErrorKind::Argument ? 2 : 1;
  return 1;
}

}  // namespace

CommandResult run_command(const RunOptions& opt, const ProblemConfig& config) {
  if (opt.command == "validate") return validate(opt, config);
  if (opt.command == "solve") return solve(opt, config);
  if (opt.command == "eigs") return eigs(opt, config);
  if (opt.command == "identities") return identities(opt, config);
  if (opt.command == "compare") return compare(opt, config);
  raise(ErrorKind::Argument, "unknown command '" + opt.command + "'");
}

std::string error_json(const std::exception& e) {
  Json err;
  if (auto* c = dynamic_cast<const ConfigError*>(&e)) {
    err["kind"] = "ConfigError";
    err["message"] = c->what();
    err["path"] = c->path();
    if (c->line() > 0) {
      err["line"] = c->line();
      err["column"] = c->column();
    }
  } else if (auto* u = dynamic_cast<const Error*>(&e)) {
    err["kind"] = std::string(u->kind_name());
    err["message"] = u->what();
  } else {
    err["kind"] = "InternalError";
    err["message"] = e.what();
  }
  return Json{{"error", err}}.dump() + "\n";
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unified transform solver for variable-coefficient diffusion problems", "utm"};
  app.require_subcommand(1);
  RunOptions opt;
  std::string grid;
  int count = 0, nmax = 0;
  unsigned seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "problem configuration (YAML)")->required();
    sub->add_option("--out", opt.out, "output directory (default: print to stdout)");
  };
  CLI::App* v = app.add_subcommand("validate", "check the assumptions, classify the boundary conditions");
  common(v);
  CLI::App* s = app.add_subcommand("solve", "evaluate q on a grid, emit CSV");
  common(s);
  CLI::App* e = app.add_subcommand("eigs", "eigenvalues of the finite-interval operator, emit JSON");
  common(e);
  CLI::App* id = app.add_subcommand("identities", "run the property suites on the configuration");
  common(id);
  CLI::App* cmp = app.add_subcommand("compare", "solve and compare against a reference solver");
  common(cmp);
  for (CLI::App* sub : {v, s, cmp}) sub->add_option("--grid", grid, "\"nx,nt,xa,xb,ta,tb\"");
  CLI::Option* count_opt = e->add_option("--count", count, "number of eigenvalues");
  CLI::Option* nmax_opt = e->add_option("--nmax", nmax, "truncation order N");
  cmp->add_option("--oracle", opt.oracle, "reference solver")->check(CLI::IsMember({"cn", "fourier", "kernel"}));
  CLI::Option* seed_opt = id->add_option("--seed", seed, "seed of the randomized suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok, out, err);
  } catch (const CLI::ParseError& pe) {
    Json j{{"error", {{"kind", "UsageError"}, {"message", pe.what()}}}};
    err << j.dump() << "\n";
    return 2;
  }

  try {
    opt.command = app.get_subcommands().front()->get_name();
    if (!grid.empty()) opt.grid = parse_grid(grid);
    if (*count_opt) opt.count = count;
    if (*nmax_opt) opt.nmax = nmax;
    if (*seed_opt) opt.seed = seed;
    ProblemConfig config = parse_config(opt.config);
    if (opt.out.empty()) opt.out = config.out_dir;
    CommandResult r = run_command(opt, config);
    if (opt.out.empty()) {
      out << r.primary;
      auto bad = r.files.find("eigs_error.json");
      if (bad != r.files.end()) err << bad->second;
    } else {
      for (const auto& [name, text] : r.files) write_file(opt.out, name, text);
    }
    out.flush();
    return r.exit_code;
  } catch (const std::exception& ex) {
    err << error_json(ex);
    return exit_code_for(ex);
  }
}

}  // namespace utm::cli
