#pragma once

#include <functional>

#include "divlab/error.hpp"

namespace divlab::flowgen {

// Interpolation path x_t = alpha(t) x0 + sigma(t) eps on t in [0, 1], with
// alpha(0) = 1, sigma(0) = 0 at the data end and alpha(1) = 0, sigma(1) = 1
// at the noise end. Derivatives feed the velocity regression target.
struct NoiseSchedule {
    std::function<double(double)> alpha;
    std::function<double(double)> sigma;
    std::function<double(double)> alpha_dot;
    std::function<double(double)> sigma_dot;
};

// Straight-line path: alpha = 1 - t, sigma = t.
inline NoiseSchedule rectified_schedule() {
    return {
        [](double t) { return 1.0 - t; },
        [](double t) { return t; },
        [](double) { return -1.0; },
        [](double) { return 1.0; },
    };
}

inline void check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        raise(ErrorKind::TimeOutOfRange, "t = " + std::to_string(t));
}

} // namespace divlab::flowgen
