#pragma once

#include <map>
#include <string>
#include <vector>

#include "utm/coefficients.hpp"

namespace utm {

using PresetParams = std::map<std::string, cplx>;

// Shipped coefficient families (analytic derivatives included):
//   constant       alpha, beta, gamma
//   linear         beta = b0 + b1 x;  alpha, gamma constant
//   gaussian_bump  beta = 1 + amp exp(-((x - center)/width)^2)
//   tanh_step      beta = b0 + b1 tanh((x - center)/width)
//   cgl            alpha = 1 + i x sin(2 pi x), beta = 1, gamma
CoefficientProfile make_preset(const std::string& name, const PresetParams& params = {});
std::vector<std::string> preset_names();
// Parameters accepted by a preset with their defaults.
PresetParams preset_defaults(const std::string& name);

}  // namespace utm
