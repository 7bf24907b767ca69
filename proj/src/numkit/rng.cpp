#include "divlab/numkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace divlab::numkit {

double RandomStream::next_gaussian() {
    double u1 = next_uniform();
    double u2 = next_uniform();
    // 1 - u1 keeps the log argument in (0, 1].
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace divlab::numkit
