#pragma once

#include <array>
#include <cmath>

namespace hpe {

/// Physical or reference coordinates. 1D entities use only the first slot.
using Point = std::array<double, 2>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point midpoint(const Point& a, const Point& b) { return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}; }

}  // namespace hpe
