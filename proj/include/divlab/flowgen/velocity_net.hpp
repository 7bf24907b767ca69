#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "divlab/flowgen/vec2.hpp"
#include "divlab/numkit/rng.hpp"

namespace divlab::flowgen {

// Two-hidden-layer tanh MLP mapping (x, y, t, one-hot condition) -> velocity.
struct NetShape {
    int condition_count = 8;
    int hidden_width = 64;

    int input_dim() const { return 3 + condition_count; }

    std::size_t param_count() const {
        std::size_t d = static_cast<std::size_t>(input_dim());
        std::size_t h = static_cast<std::size_t>(hidden_width);
        return h * d + h + h * h + h + 2 * h + 2;
    }

    bool operator==(const NetShape&) const = default;
};

struct FlowParams {
    NetShape shape;
    std::vector<double> w; // flat: W1, b1, W2, b2, W3, b3
    std::uint64_t seed = 0; // provenance, recorded in the file header
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
FlowParams init_params(const NetShape& shape, numkit::RandomStream& stream);

// Activations captured by the forward pass; one per concurrent evaluation.
struct NetTape {
    std::vector<double> in, h1, h2;
};

Vec2 velocity_fwd(const FlowParams& p, Vec2 x, double t, int condition, NetTape& tape);
Vec2 velocity(const FlowParams& p, Vec2 x, double t, int condition);

// Accumulates d(dl_dout . v)/dtheta into grad (same layout as p.w).
void velocity_backward_params(const FlowParams& p, const NetTape& tape, Vec2 dl_dout,
                              std::span<double> grad);

} // namespace divlab::flowgen
