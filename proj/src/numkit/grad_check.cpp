#include "divlab/numkit/grad_check.hpp"

#include <cmath>
#include <string>

namespace divlab::numkit {

RealVector finite_diff_grad(const std::function<double(const RealVector&)>& f,
                            const RealVector& x, double h) {
    if (!(h > 0.0) || !std::isfinite(h))
        raise(ErrorKind::DomainError, "finite_diff_grad: h must be positive and finite");
    RealVector g(x.size());
    RealVector probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        double fp = f(probe);
        probe[i] = x[i] - h;
        double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm))
            raise(ErrorKind::NonFiniteEvaluation,
                  "finite_diff_grad: f non-finite at coordinate " + std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double grad_rel_err(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size())
        raise(ErrorKind::LengthMismatch, "grad_rel_err: size mismatch");
    double num = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::fabs(a[i] - b[i]));
        scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
    }
    return num / scale;
}

} // namespace divlab::numkit
