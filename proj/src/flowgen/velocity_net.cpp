#include "divlab/flowgen/velocity_net.hpp"

#include <cmath>
#include <string>

#include "divlab/error.hpp"

namespace divlab::flowgen {

namespace {

struct Slices {
    std::size_t w1, b1, w2, b2, w3, b3, end;
};

Slices slices(const NetShape& s) {
    std::size_t d = static_cast<std::size_t>(s.input_dim());
    std::size_t h = static_cast<std::size_t>(s.hidden_width);
    Slices sl{};
    sl.w1 = 0;
    sl.b1 = sl.w1 + h * d;
    sl.w2 = sl.b1 + h;
    sl.b2 = sl.w2 + h * h;
    sl.w3 = sl.b2 + h;
    sl.b3 = sl.w3 + 2 * h;
    sl.end = sl.b3 + 2;
    return sl;
}

void check_condition(const NetShape& s, int condition) {
    if (condition < 0 || condition >= s.condition_count)
        raise(ErrorKind::UnknownCondition,
              "condition " + std::to_string(condition) + " of " +
                  std::to_string(s.condition_count));
}

} // namespace

FlowParams init_params(const NetShape& shape, numkit::RandomStream& stream) {
    FlowParams p;
    p.shape = shape;
    p.seed = stream.seed();
    p.w.assign(shape.param_count(), 0.0);
    Slices sl = slices(shape);
    std::size_t d = static_cast<std::size_t>(shape.input_dim());
    std::size_t h = static_cast<std::size_t>(shape.hidden_width);
    auto fill = [&](std::size_t off, std::size_t count, double bound) {
        for (std::size_t i = 0; i < count; ++i)
            p.w[off + i] = (2.0 * stream.next_uniform() - 1.0) * bound;
    };
    fill(sl.w1, h * d, 1.0 / std::sqrt(static_cast<double>(d)));
    fill(sl.w2, h * h, 1.0 / std::sqrt(static_cast<double>(h)));
    fill(sl.w3, 2 * h, 1.0 / std::sqrt(static_cast<double>(h)));
    return p;
}

Vec2 velocity_fwd(const FlowParams& p, Vec2 x, double t, int condition, NetTape& tape) {
    const NetShape& s = p.shape;
    check_condition(s, condition);
    Slices sl = slices(s);
    std::size_t d = static_cast<std::size_t>(s.input_dim());
    std::size_t h = static_cast<std::size_t>(s.hidden_width);

    tape.in.assign(d, 0.0);
    tape.in[0] = x.x;
    tape.in[1] = x.y;
    tape.in[2] = t;
    tape.in[3 + static_cast<std::size_t>(condition)] = 1.0;

    tape.h1.assign(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        double a = p.w[sl.b1 + i];
        const double* row = &p.w[sl.w1 + i * d];
        for (std::size_t j = 0; j < d; ++j) a += row[j] * tape.in[j];
        tape.h1[i] = std::tanh(a);
    }

    tape.h2.assign(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        double a = p.w[sl.b2 + i];
        const double* row = &p.w[sl.w2 + i * h];
        for (std::size_t j = 0; j < h; ++j) a += row[j] * tape.h1[j];
        tape.h2[i] = std::tanh(a);
    }

    Vec2 out{p.w[sl.b3 + 0], p.w[sl.b3 + 1]};
    for (std::size_t j = 0; j < h; ++j) {
        out.x += p.w[sl.w3 + j] * tape.h2[j];
        out.y += p.w[sl.w3 + h + j] * tape.h2[j];
    }
    return out;
}

Vec2 velocity(const FlowParams& p, Vec2 x, double t, int condition) {
    NetTape tape;
    return velocity_fwd(p, x, t, condition, tape);
}

void velocity_backward_params(const FlowParams& p, const NetTape& tape, Vec2 dl_dout,
                              std::span<double> grad) {
    const NetShape& s = p.shape;
    Slices sl = slices(s);
    std::size_t d = static_cast<std::size_t>(s.input_dim());
    std::size_t h = static_cast<std::size_t>(s.hidden_width);

    // Output layer.
    grad[sl.b3 + 0] += dl_dout.x;
    grad[sl.b3 + 1] += dl_dout.y;
    std::vector<double> gh2(h, 0.0);
    for (std::size_t j = 0; j < h; ++j) {
        grad[sl.w3 + j] += dl_dout.x * tape.h2[j];
        grad[sl.w3 + h + j] += dl_dout.y * tape.h2[j];
        gh2[j] = dl_dout.x * p.w[sl.w3 + j] + dl_dout.y * p.w[sl.w3 + h + j];
    }

    // Second hidden layer.
    std::vector<double> gh1(h, 0.0);
    for (std::size_t i = 0; i < h; ++i) {
        double di = gh2[i] * (1.0 - tape.h2[i] * tape.h2[i]);
        grad[sl.b2 + i] += di;
        const double* row = &p.w[sl.w2 + i * h];
        double* grow = &grad[sl.w2 + i * h];
        for (std::size_t j = 0; j < h; ++j) {
            grow[j] += di * tape.h1[j];
            gh1[j] += di * row[j];
        }
    }

    // First hidden layer.
    for (std::size_t i = 0; i < h; ++i) {
        double di = gh1[i] * (1.0 - tape.h1[i] * tape.h1[i]);
        grad[sl.b1 + i] += di;
        double* grow = &grad[sl.w1 + i * d];
        for (std::size_t j = 0; j < d; ++j) grow[j] += di * tape.in[j];
    }
}

} // namespace divlab::flowgen
