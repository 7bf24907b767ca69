#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "divlab/error.hpp"

namespace divlab::numkit {

using RealVector = std::vector<double>;

// Norms below this are treated as zero everywhere in the project.
inline constexpr double kNormEps = 1e-12;

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(ErrorKind::LengthMismatch,
              "dot: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

RealVector normalize(std::span<const double> v);

// Clamped to [-1, 1] so downstream acos/comparisons never see rounding spill.
double cosine(std::span<const double> a, std::span<const double> b);

inline RealVector add(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(ErrorKind::LengthMismatch,
              "add: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    RealVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RealVector sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(ErrorKind::LengthMismatch,
              "sub: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    RealVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RealVector scale(std::span<const double> a, double c) {
    RealVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

} // namespace divlab::numkit
