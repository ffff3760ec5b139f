#pragma once

#include <cmath>
#include <limits>

namespace fracswitch {

// 1/Gamma(x) for real x, with the poles at x = 0, -1, -2, ... mapped to 0.
inline double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    if (x > 171.0) return 0.0;  // Gamma overflows double
    return 1.0 / std::tgamma(x);
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace fracswitch
