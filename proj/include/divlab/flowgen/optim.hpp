#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace divlab::flowgen {

// Adaptive-moments update with decoupled weight decay.
struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

struct AdamState {
    std::vector<double> m, v;
    std::int64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> w, std::span<const double> g, AdamState& st,
               const AdamConfig& cfg);

// Scales g in place so its l2 norm is at most max_norm (no-op when
// max_norm <= 0); returns the pre-clip norm.
double clip_global_norm(std::span<double> g, double max_norm);

} // namespace divlab::flowgen
