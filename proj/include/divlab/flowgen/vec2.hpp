#pragma once

#include <cmath>

namespace divlab::flowgen {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {x * c, y * c}; }
    Vec2 operator/(double c) const { return {x / c, y / c}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

} // namespace divlab::flowgen
