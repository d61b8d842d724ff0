#pragma once

#include <array>
#include <cmath>

namespace bhc {

// Point in R^d for d <= 3; trailing components are zero.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point scaled(const Point& a, double c) {
    return {a[0] * c, a[1] * c, a[2] * c};
}

} // namespace bhc
