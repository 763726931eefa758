#include "utm/presets.hpp"

#include <cmath>

#include "utm/errors.hpp"

namespace utm {

namespace {

ScalarFn constant_fn(cplx c) {
  return [c](double) { return c; };
}

PresetParams merged(const std::string& name, const PresetParams& given) {
  PresetParams p = preset_defaults(name);
  for (const auto& [key, value] : given) {
    if (!p.count(key)) raise(ErrorKind::Argument, "preset '" + name + "' has no parameter '" + key + "'");
    p[key] = value;
  }
  return p;
}

}  // namespace

std::vector<std::string> preset_names() { return {"constant", "linear", "gaussian_bump", "tanh_step", "cgl"}; }

PresetParams preset_defaults(const std::string& name) {
  if (name == "constant") return {{"alpha", 1.0}, {"beta", 1.0}, {"gamma", 0.0}};
  if (name == "linear") return {{"alpha", 1.0}, {"b0", 1.0}, {"b1", 0.5}, {"gamma", 0.0}};
  if (name == "gaussian_bump")
    return {{"alpha", 1.0}, {"amp", 0.5}, {"center", 0.5}, {"width", 0.2}, {"gamma", 0.0}};
  if (name == "tanh_step")
    return {{"alpha", 1.0}, {"b0", 1.0}, {"b1", 0.3}, {"center", 0.5}, {"width", 0.1}, {"gamma", 0.0}};
  if (name == "cgl") return {{"gamma", 1.0}};
  raise(ErrorKind::Argument, "unknown coefficient preset '" + name + "'");
}

CoefficientProfile make_preset(const std::string& name, const PresetParams& given) {
  PresetParams p = merged(name, given);
  CoefficientProfile prof;
  prof.name = name;
  prof.gamma = constant_fn(p["gamma"]);
  prof.gamma_prime = constant_fn(0.0);
  prof.gamma_constant = true;
  if (name == "constant") {
    prof.alpha = constant_fn(p["alpha"]);
    prof.beta = constant_fn(p["beta"]);
    prof.alpha_prime = constant_fn(0.0);
    prof.beta_prime = constant_fn(0.0);
  } else if (name == "linear") {
    cplx b0 = p["b0"], b1 = p["b1"];
    prof.alpha = constant_fn(p["alpha"]);
    prof.alpha_prime = constant_fn(0.0);
    prof.beta = [b0, b1](double x) { return b0 + b1 * x; };
    prof.beta_prime = constant_fn(b1);
  } else if (name == "gaussian_bump") {
    cplx amp = p["amp"];
    double c = p["center"].real(), w = p["width"].real();
    if (!(w > 0.0)) raise(ErrorKind::Argument, "gaussian_bump: width must be positive");
    prof.alpha = constant_fn(p["alpha"]);
    prof.alpha_prime = constant_fn(0.0);
    prof.beta = [amp, c, w](double x) {
      double z = (x - c) / w;
      return 1.0 + amp * std::exp(-z * z);
    };
    prof.beta_prime = [amp, c, w](double x) {
      double z = (x - c) / w;
      return amp * (-2.0 * z / w) * std::exp(-z * z);
    };
  } else if (name == "tanh_step") {
    cplx b0 = p["b0"], b1 = p["b1"];
    double c = p["center"].real(), w = p["width"].real();
    if (!(w > 0.0)) raise(ErrorKind::Argument, "tanh_step: width must be positive");
    prof.alpha = constant_fn(p["alpha"]);
    prof.alpha_prime = constant_fn(0.0);
    prof.beta = [b0, b1, c, w](double x) { return b0 + b1 * std::tanh((x - c) / w); };
    prof.beta_prime = [b1, c, w](double x) {
      double s = 1.0 / std::cosh((x - c) / w);
      return b1 * s * s / w;
    };
  } else if (name == "cgl") {
    prof.alpha = [](double x) { return cplx(1.0, x * std::sin(2.0 * pi * x)); };
    prof.alpha_prime = [](double x) {
      return cplx(0.0, std::sin(2.0 * pi * x) + 2.0 * pi * x * std::cos(2.0 * pi * x));
    };
    prof.beta = constant_fn(1.0);
    prof.beta_prime = constant_fn(0.0);
  }
  return prof;
}

}  // namespace utm
