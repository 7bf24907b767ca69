#include "divlab/numkit/vec.hpp"

#include <algorithm>

namespace divlab::numkit {

RealVector normalize(std::span<const double> v) {
    double n = norm2(v);
    if (!(n > kNormEps))
        raise(ErrorKind::ZeroNorm, "normalize: norm " + std::to_string(n));
    RealVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / n;
    return r;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        raise(ErrorKind::LengthMismatch,
              "cosine: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double na = norm2(a);
    double nb = norm2(b);
    if (!(na > kNormEps) || !(nb > kNormEps))
        raise(ErrorKind::ZeroNorm, "cosine: norms " + std::to_string(na) + ", " + std::to_string(nb));
    double c = dot(a, b) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

} // namespace divlab::numkit
