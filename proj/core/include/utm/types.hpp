#pragma once

#include <complex>
#include <functional>
#include <numbers>

namespace utm {

using cplx = std::complex<double>;
using ScalarFn = std::function<cplx(double)>;
using SpaceTimeFn = std::function<cplx(double, double)>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

}  // namespace utm
