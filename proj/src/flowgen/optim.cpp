#include "divlab/flowgen/optim.hpp"

#include <cmath>

#include "divlab/error.hpp"

namespace divlab::flowgen {

void adam_step(std::span<double> w, std::span<const double> g, AdamState& st,
               const AdamConfig& cfg) {
    if (w.size() != g.size() || w.size() != st.m.size())
        raise(ErrorKind::LengthMismatch, "adam_step: buffer sizes differ");
    st.t += 1;
    double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
    double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < w.size(); ++i) {
        st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * g[i];
        st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        double mhat = st.m[i] / bc1;
        double vhat = st.v[i] / bc2;
        w[i] -= cfg.lr * (mhat / (std::sqrt(vhat) + cfg.eps) + cfg.weight_decay * w[i]);
    }
}

double clip_global_norm(std::span<double> g, double max_norm) {
    double s = 0.0;
    for (double x : g) s += x * x;
    double n = std::sqrt(s);
    if (max_norm > 0.0 && n > max_norm) {
        double f = max_norm / n;
        for (double& x : g) x *= f;
    }
    return n;
}

} // namespace divlab::flowgen
