#pragma once

#include <functional>

#include "divlab/numkit/vec.hpp"

namespace divlab::numkit {

// Central-difference gradient of a scalar field, used to police every
// hand-written backward pass in the project.
RealVector finite_diff_grad(const std::function<double(const RealVector&)>& f,
                            const RealVector& x, double h);

// Relative error max|a-b| / max(1, max|a|, max|b|), the yardstick the
// gradient tests assert against.
double grad_rel_err(const RealVector& a, const RealVector& b);

} // namespace divlab::numkit
