#include "utm_cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>

#include "utm/presets.hpp"
#include "utm/solver.hpp"

namespace utm::cli {

ConfigError::ConfigError(std::string path, const std::string& message, int line, int column, std::string file)
    : Error(ErrorKind::Config,
            (file.empty() ? std::string() : file + ":") +
                (line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " : std::string()) +
                (path.empty() ? std::string() : path + ": ") + message),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

std::vector<double> GridSpec::xs() const { return linspace(xa, xb, nx); }
std::vector<double> GridSpec::ts() const { return linspace(ta, tb, nt); }

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) throw ConfigError("--grid", "expected \"nx,nt,xa,xb,ta,tb\", got \"" + text + "\"");
  GridSpec g;
  auto count = [&](const std::string& s, const char* name) {
    size_t used = 0;
    long v = -1;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used == 0 || s.find_first_not_of(" ", used) != std::string::npos)
      throw ConfigError("--grid", std::string(name) + " must be a non-negative integer, got \"" + s + "\"");
    return static_cast<size_t>(v);
  };
  auto real = [&](const std::string& s, const char* name) {
    size_t used = 0;
    double v = NAN;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
    }
    if (!std::isfinite(v) || s.find_first_not_of(" ", used) != std::string::npos)
      throw ConfigError("--grid", std::string(name) + " must be a finite number, got \"" + s + "\"");
    return v;
  };
  g.nx = count(parts[0], "nx");
  g.nt = count(parts[1], "nt");
  g.xa = real(parts[2], "xa");
  g.xb = real(parts[3], "xb");
  g.ta = real(parts[4], "ta");
  g.tb = real(parts[5], "tb");
  return g;
}

namespace {

// A node together with its dotted path and the nearest known source position.
struct At {
  YAML::Node node;
  std::string path;
  YAML::Mark mark;
  const std::string* file;

  [[noreturn]] void fail(const std::string& message) const {
    const YAML::Mark m = node.IsDefined() && !node.Mark().is_null() ? node.Mark() : mark;
    const bool known = !m.is_null();
    throw ConfigError(path, message, known ? m.line + 1 : 0, known ? m.column + 1 : 0, *file);
  }

  bool has(const std::string& key) const { return node.IsMap() && node[key].IsDefined() && !node[key].IsNull(); }

  At operator[](const std::string& key) const {
    return {node.IsMap() ? node[key] : YAML::Node(YAML::NodeType::Undefined), path.empty() ? key : path + "." + key,
            node.Mark().is_null() ? mark : node.Mark(), file};
  }
  At operator[](size_t i) const {
    return {node[i], path + "[" + std::to_string(i) + "]", node.Mark().is_null() ? mark : node.Mark(), file};
  }

  At map(std::initializer_list<const char*> allowed) const {
    if (!node.IsMap()) fail("expected a mapping");
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string key = it->first.as<std::string>();
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
        At k{it->first, path.empty() ? key : path + "." + key, mark, file};
        k.fail("unknown key");
      }
    }
    return *this;
  }

  std::string text() const {
    if (!node.IsScalar()) fail("expected a scalar");
    return node.Scalar();
  }

  double real() const {
    double v = 0.0;
    if (!node.IsScalar() || !YAML::convert<double>::decode(node, v)) fail("expected a number");
    if (!std::isfinite(v)) fail("must be finite");
    return v;
  }

  long integer() const {
    long v = 0;
    if (!node.IsScalar() || !YAML::convert<long>::decode(node, v)) fail("expected an integer");
    return v;
  }

  bool boolean() const {
    bool v = false;
    if (!node.IsScalar() || !YAML::convert<bool>::decode(node, v)) fail("expected true or false");
    return v;
  }

  Expression expression() const {
    const std::string s = text();
    try {
      return Expression::parse(s);
    } catch (const ExpressionError& e) {
      fail(std::string(e.what()) + "\n" + e.caret());
    }
  }

  // Number or constant expression such as "0.5 - 2i".
  cplx complex() const {
    double v = 0.0;
    if (node.IsScalar() && YAML::convert<double>::decode(node, v)) {
      if (!std::isfinite(v)) fail("must be finite");
      return v;
    }
    Expression e = expression();
    if (e.depends_on_x() || e.depends_on_t()) fail("expected a constant");
    cplx c = e(0.0, 0.0);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) fail("must be finite");
    return c;
  }

  size_t size() const {
    if (!node.IsSequence()) fail("expected a sequence");
    return node.size();
  }
};

double positive(const At& a) {
  double v = a.real();
  if (!(v > 0.0)) a.fail("must be positive");
  return v;
}

void parse_domain(const At& d, ProblemConfig& c) {
  d.map({"kind", "xl", "xr", "truncation"});
  const std::string kind = d.has("kind") ? d["kind"].text() : "finite";
  if (kind == "finite") {
    c.domain.kind = DomainKind::FiniteInterval;
    c.domain.xl = d.has("xl") ? d["xl"].real() : 0.0;
    c.domain.xr = d.has("xr") ? d["xr"].real() : 1.0;
    if (!(c.domain.xl < c.domain.xr)) d["xr"].fail("must exceed xl");
    if (d.has("truncation")) d["truncation"].fail("only unbounded domains take a truncation");
  } else if (kind == "half_line" || kind == "whole_line") {
    c.domain.kind = kind == "half_line" ? DomainKind::HalfLine : DomainKind::WholeLine;
    if (d.has("xr")) d["xr"].fail("unbounded domains have no xr");
    if (kind == "whole_line" && d.has("xl")) d["xl"].fail("the whole line has no xl");
    c.domain.xl = d.has("xl") ? d["xl"].real() : 0.0;
    c.domain.xr = 0.0;
    c.domain.truncation = d.has("truncation") ? d["truncation"].real() : 0.0;
    if (c.domain.truncation < 0.0) d["truncation"].fail("must be non-negative");
  } else {
    d["kind"].fail("expected finite, half_line or whole_line");
  }
}

void parse_coefficients(const At& a, CoefficientSpec& s) {
  if (!a.node.IsMap()) a.fail("expected a mapping");
  if (a.has("mode"))
    s.mode = a["mode"].text();
  else
    s.mode = a.has("preset") ? "preset" : "expression";
  if (s.mode == "preset") {
    a.map({"mode", "preset", "params"});
    if (!a.has("preset")) a["preset"].fail("missing");
    s.preset = a["preset"].text();
    auto names = preset_names();
    if (std::find(names.begin(), names.end(), s.preset) == names.end()) a["preset"].fail("unknown preset");
    PresetParams defaults = preset_defaults(s.preset);
    if (a.has("params")) {
      At p = a["params"];
      if (!p.node.IsMap()) p.fail("expected a mapping");
      for (auto it = p.node.begin(); it != p.node.end(); ++it) {
        const std::string key = it->first.as<std::string>();
        At v = p[key];
        if (!defaults.count(key)) At{it->first, v.path, p.mark, p.file}.fail("unknown parameter of " + s.preset);
        s.params[key] = v.complex();
      }
    }
  } else if (s.mode == "expression") {
    a.map({"mode", "alpha", "beta", "gamma", "alpha_prime", "beta_prime", "gamma_prime"});
    for (const char* key : {"alpha", "beta", "gamma"})
      if (!a.has(key)) a[key].fail("missing");
    s.alpha = a["alpha"].expression();
    s.beta = a["beta"].expression();
    s.gamma = a["gamma"].expression();
    if (a.has("alpha_prime")) s.alpha_prime = a["alpha_prime"].expression();
    if (a.has("beta_prime")) s.beta_prime = a["beta_prime"].expression();
    if (a.has("gamma_prime")) s.gamma_prime = a["gamma_prime"].expression();
    for (auto* e : {&s.alpha, &s.beta, &s.gamma})
      if ((*e)->depends_on_t()) a.fail("coefficients cannot depend on t");
  } else if (s.mode == "samples") {
    a.map({"mode", "x0", "dx", "alpha", "beta", "gamma"});
    s.x0 = a["x0"].real();
    s.dx = positive(a["dx"]);
    auto read = [&](const char* key, std::vector<cplx>& out) {
      At seq = a[key];
      const size_t n = seq.size();
      if (n < 4) seq.fail("need at least 4 samples");
      for (size_t i = 0; i < n; ++i) out.push_back(seq[i].complex());
    };
    read("alpha", s.alpha_samples);
    read("beta", s.beta_samples);
    read("gamma", s.gamma_samples);
    if (s.beta_samples.size() != s.alpha_samples.size()) a["beta"].fail("length differs from alpha");
    if (s.gamma_samples.size() != s.alpha_samples.size()) a["gamma"].fail("length differs from alpha");
  } else {
    a["mode"].fail("expected preset, expression or samples");
  }
}

void parse_bc(const At& b, ProblemConfig& c) {
  switch (c.domain.kind) {
    case DomainKind::FiniteInterval: {
      b.map({"rows"});
      At rows = b["rows"];
      if (!rows.node.IsDefined()) rows.fail("missing (a finite interval needs two rows)");
      const size_t n = rows.size();
      if (n > 2) rows[2].fail("a finite interval takes exactly two rows");
      std::array<std::array<cplx, 4>, 2> r{};
      for (size_t i = 0; i < 2; ++i) {
        if (i >= n) rows[i].fail("missing (a finite interval needs two rows)");
        At row = rows[i];
        if (row.size() != 4) row.fail("expected 4 coefficients (q(xl), q_x(xl), q(xr), q_x(xr))");
        for (size_t j = 0; j < 4; ++j) r[i][j] = row[j].complex();
      }
      c.bc.kind = DomainKind::FiniteInterval;
      c.bc.rows = r;
      break;
    }
    case DomainKind::HalfLine:
      b.map({"a0", "a1"});
      if (!b.has("a0")) b["a0"].fail("missing");
      if (!b.has("a1")) b["a1"].fail("missing");
      c.bc.kind = DomainKind::HalfLine;
      c.bc.a0 = b["a0"].complex();
      c.bc.a1 = b["a1"].complex();
      break;
    case DomainKind::WholeLine:
      b.map({});
      c.bc = BoundaryConditions::whole_line();
      break;
  }
  try {
    c.bc.validate();
  } catch (const Error& e) {
    b.fail(e.what());
  }
}

void parse_data(const At& d, ProblemConfig& c) {
  d.map({"q0", "f", "f_t", "f0", "f1", "breaks"});
  DataSpec& s = c.data;
  if (d.has("q0")) s.q0 = d["q0"].expression();
  if (d.has("f")) s.f = d["f"].expression();
  if (d.has("f_t")) s.f_t = d["f_t"].expression();
  if (d.has("f0")) s.f0 = d["f0"].expression();
  if (d.has("f1")) s.f1 = d["f1"].expression();
  if (s.q0 && s.q0->depends_on_t()) d["q0"].fail("q0 cannot depend on t");
  if (s.f0 && s.f0->depends_on_x()) d["f0"].fail("boundary data depends on t only");
  if (s.f1 && s.f1->depends_on_x()) d["f1"].fail("boundary data depends on t only");
  if (s.f0 && c.domain.kind == DomainKind::WholeLine) d["f0"].fail("the whole line has no boundary data");
  if (s.f1 && c.domain.kind != DomainKind::FiniteInterval) d["f1"].fail("only a finite interval has a second row");
  if (s.f_t && !s.f) d["f_t"].fail("given without f");
  if (d.has("breaks")) {
    At b = d["breaks"];
    for (size_t i = 0; i < b.size(); ++i) s.breaks.push_back(b[i].real());
  }
}

void parse_numerics(const At& n, SolveOptions& o) {
  n.map({"N", "contour", "grid_refine", "ibp_depth", "max_nodes", "delta_min"});
  if (n.has("N")) {
    long N = n["N"].integer();
    if (N < -1 || N > kMaxTruncation) n["N"].fail("expected -1 (automatic) or 0.." + std::to_string(kMaxTruncation));
    o.N = static_cast<int>(N);
  }
  if (n.has("contour")) {
    At c = n["contour"].map({"safety", "theta0", "radius", "t_min", "tol", "refine"});
    if (c.has("safety")) o.safety = positive(c["safety"]);
    if (c.has("theta0")) o.theta0 = positive(c["theta0"]);
    if (c.has("radius")) o.radius = positive(c["radius"]);
    if (c.has("t_min")) o.t_min = positive(c["t_min"]);
    if (c.has("tol")) o.tol = positive(c["tol"]);
    if (c.has("refine")) o.contour_refine = positive(c["refine"]);
  }
  if (n.has("grid_refine")) o.grid_refine = positive(n["grid_refine"]);
  if (n.has("ibp_depth")) {
    long d = n["ibp_depth"].integer();
    if (d < 1 || d > 2) n["ibp_depth"].fail("expected 1 or 2");
    o.ibp_depth = static_cast<int>(d);
  }
  if (n.has("max_nodes")) {
    long m = n["max_nodes"].integer();
    if (m < 64) n["max_nodes"].fail("expected at least 64");
    o.max_nodes = static_cast<size_t>(m);
  }
  if (n.has("delta_min")) o.delta_min = n["delta_min"].real();
}

void parse_grid_node(const At& g, GridSpec& s) {
  g.map({"nx", "nt", "xa", "xb", "ta", "tb"});
  auto count = [](const At& a) {
    long v = a.integer();
    if (v < 0) a.fail("must be non-negative");
    return static_cast<size_t>(v);
  };
  if (g.has("nx")) s.nx = count(g["nx"]);
  if (g.has("nt")) s.nt = count(g["nt"]);
  if (g.has("xa")) s.xa = g["xa"].real();
  if (g.has("xb")) s.xb = g["xb"].real();
  if (g.has("ta")) s.ta = g["ta"].real();
  if (g.has("tb")) s.tb = g["tb"].real();
}

ScalarFn space_fn(const Expression& e) {
  return [e](double x) { return e(x, 0.0); };
}

// Uniformly sampled complex profile: cubic B-splines of the real and imaginary parts,
// held constant beyond the sampled range.
struct SampledFn {
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  std::shared_ptr<Spline> re, im;
  double lo, hi;

  SampledFn(const std::vector<cplx>& v, double x0, double dx) : lo(x0), hi(x0 + dx * (v.size() - 1)) {
    std::vector<double> r(v.size()), i(v.size());
    for (size_t j = 0; j < v.size(); ++j) {
      r[j] = v[j].real();
      i[j] = v[j].imag();
    }
    re = std::make_shared<Spline>(r.begin(), r.end(), x0, dx);
    im = std::make_shared<Spline>(i.begin(), i.end(), x0, dx);
  }
  cplx value(double x) const {
    x = std::clamp(x, lo, hi);
    return {(*re)(x), (*im)(x)};
  }
  cplx prime(double x) const {
    if (x < lo || x > hi) return 0.0;
    return {re->prime(x), im->prime(x)};
  }
};

void add_sampled(const std::vector<cplx>& v, double x0, double dx, ScalarFn& f, ScalarFn& fp) {
  auto s = std::make_shared<SampledFn>(v, x0, dx);
  f = [s](double x) { return s->value(x); };
  fp = [s](double x) { return s->prime(x); };
}

}  // namespace

CoefficientProfile ProblemConfig::profile() const {
  const CoefficientSpec& s = coefficients;
  if (s.mode == "preset") return make_preset(s.preset, s.params);
  CoefficientProfile p;
  if (s.mode == "expression") {
    p.name = "expression";
    p.alpha = space_fn(*s.alpha);
    p.beta = space_fn(*s.beta);
    p.gamma = space_fn(*s.gamma);
    if (s.alpha_prime) p.alpha_prime = space_fn(*s.alpha_prime);
    if (s.beta_prime) p.beta_prime = space_fn(*s.beta_prime);
    if (s.gamma_prime) p.gamma_prime = space_fn(*s.gamma_prime);
    if (!s.gamma->depends_on_x()) {
      p.gamma_constant = true;
      if (!s.gamma_prime) p.gamma_prime = [](double) { return cplx(0.0); };
    }
    return p;
  }
  p.name = "samples";
  add_sampled(s.alpha_samples, s.x0, s.dx, p.alpha, p.alpha_prime);
  add_sampled(s.beta_samples, s.x0, s.dx, p.beta, p.beta_prime);
  add_sampled(s.gamma_samples, s.x0, s.dx, p.gamma, p.gamma_prime);
  return p;
}

ProblemData ProblemConfig::problem_data() const {
  ProblemData d;
  if (data.q0) d.q0 = space_fn(*data.q0);
  auto st = [](const Expression& e) { return SpaceTimeFn([e](double x, double t) { return e(x, t); }); };
  auto tf = [](const Expression& e) { return ScalarFn([e](double t) { return e(0.0, t); }); };
  if (data.f) d.f = st(*data.f);
  if (data.f_t) d.f_t = st(*data.f_t);
  if (data.f0) d.f0 = tf(*data.f0);
  if (data.f1) d.f1 = tf(*data.f1);
  d.breaks = data.breaks;
  return d;
}

ProblemConfig parse_config_text(const std::string& text, const std::string& file) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.msg, e.mark.line + 1, e.mark.column + 1, file);
  }
  ProblemConfig c;
  c.file = file;
  At top{root, "", YAML::Mark(), &c.file};
  if (!root.IsMap()) top.fail("expected a mapping at the top level");
  top.map({"domain", "coefficients", "bc", "data", "numerics", "eigen", "oracle", "identities", "output"});

  if (top.has("domain")) parse_domain(top["domain"], c);
  if (!top.has("coefficients")) top["coefficients"].fail("missing");
  parse_coefficients(top["coefficients"], c.coefficients);
  if (c.coefficients.mode == "samples") {
    const double end = c.coefficients.x0 + c.coefficients.dx * (c.coefficients.alpha_samples.size() - 1);
    if (c.domain.kind == DomainKind::FiniteInterval &&
        (c.coefficients.x0 > c.domain.xl || end < c.domain.xr))
      top["coefficients"].fail("samples do not cover [xl, xr]");
  }
  if (top.has("bc"))
    parse_bc(top["bc"], c);
  else if (c.domain.kind == DomainKind::WholeLine)
    c.bc = BoundaryConditions::whole_line();
  else
    top["bc"].fail("missing");
  if (top.has("data")) parse_data(top["data"], c);
  if (top.has("numerics")) parse_numerics(top["numerics"], c.solve);

  if (top.has("eigen")) {
    At e = top["eigen"].map({"count", "nmax", "newton_tol", "residual_threshold"});
    if (e.has("count")) {
      long n = e["count"].integer();
      if (n < 1) e["count"].fail("must be at least 1");
      c.eigen.count = static_cast<int>(n);
    }
    if (e.has("nmax")) {
      long n = e["nmax"].integer();
      if (n < 0 || n > kMaxEigenOrder) e["nmax"].fail("expected 0.." + std::to_string(kMaxEigenOrder));
      c.eigen.nmax = static_cast<int>(n);
    }
    if (e.has("newton_tol")) c.eigen.newton_tol = positive(e["newton_tol"]);
    if (e.has("residual_threshold")) c.eigen.residual_threshold = positive(e["residual_threshold"]);
  }
  if (top.has("oracle")) {
    At o = top["oracle"].map({"kind", "nx", "dt", "richardson", "window"});
    if (o.has("kind")) {
      c.oracle.kind = o["kind"].text();
      if (c.oracle.kind != "cn" && c.oracle.kind != "fourier" && c.oracle.kind != "kernel")
        o["kind"].fail("expected cn, fourier or kernel");
    }
    if (o.has("nx")) {
      long n = o["nx"].integer();
      if (n < 8) o["nx"].fail("expected at least 8");
      c.oracle.nx = static_cast<size_t>(n);
    }
    if (o.has("dt")) c.oracle.dt = positive(o["dt"]);
    if (o.has("richardson")) c.oracle.richardson = o["richardson"].boolean();
    if (o.has("window")) c.oracle.window = positive(o["window"]);
  }
  if (top.has("identities")) {
    At s = top["identities"].map({"seed", "samples", "N"});
    if (s.has("seed")) {
      long v = s["seed"].integer();
      if (v < 0) s["seed"].fail("must be non-negative");
      c.identities.seed = static_cast<unsigned>(v);
    }
    if (s.has("samples")) {
      long v = s["samples"].integer();
      if (v < 1) s["samples"].fail("must be at least 1");
      c.identities.samples = static_cast<int>(v);
    }
    if (s.has("N")) {
      long v = s["N"].integer();
      if (v < 0 || v > kMaxTruncation) s["N"].fail("expected 0.." + std::to_string(kMaxTruncation));
      c.identities.N = static_cast<int>(v);
    }
  }
  if (top.has("output")) {
    At o = top["output"].map({"dir", "grid"});
    if (o.has("dir")) c.out_dir = o["dir"].text();
    if (o.has("grid")) parse_grid_node(o["grid"], c.grid);
  }
  return c;
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace utm::cli
