#include "divlab/flowgen/flow.hpp"

#include <cmath>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "divlab/error.hpp"

namespace divlab::flowgen {

Vec2 mode_center(const ToyDatasetSpec& spec, int k) {
    if (k < 0 || k >= spec.mode_count)
        raise(ErrorKind::UnknownCondition, "mode " + std::to_string(k));
    double ang = 2.0 * std::numbers::pi * static_cast<double>(k) /
                 static_cast<double>(spec.mode_count);
    return {spec.mode_radius * std::cos(ang), spec.mode_radius * std::sin(ang)};
}

std::vector<ToySample> make_dataset(const ToyDatasetSpec& spec, numkit::RandomStream& stream) {
    if (spec.mode_count < 1 || spec.samples_per_mode < 1)
        raise(ErrorKind::DomainError, "dataset: mode_count and samples_per_mode must be >= 1");
    std::vector<ToySample> out;
    out.reserve(static_cast<std::size_t>(spec.mode_count) *
                static_cast<std::size_t>(spec.samples_per_mode));
    for (int k = 0; k < spec.mode_count; ++k) {
        Vec2 c = mode_center(spec, k);
        for (int i = 0; i < spec.samples_per_mode; ++i) {
            Vec2 d{stream.next_gaussian(), stream.next_gaussian()};
            out.push_back({c + spec.mode_sigma * d, k});
        }
    }
    return out;
}

Vec2 forward_noise(Vec2 x0, Vec2 eps, double t, const NoiseSchedule& sched) {
    check_time(t);
    return sched.alpha(t) * x0 + sched.sigma(t) * eps;
}

LossGrad cfm_loss_and_grad_at(const FlowParams& p, std::span<const CfmItem> batch,
                              const NoiseSchedule& sched) {
    if (batch.empty())
        raise(ErrorKind::TooFewSamples, "cfm_loss_and_grad_at: empty batch");
    LossGrad out;
    out.grad.assign(p.w.size(), 0.0);
    NetTape tape;
    double inv_b = 1.0 / static_cast<double>(batch.size());
    for (const CfmItem& it : batch) {
        Vec2 xt = forward_noise(it.x0, it.eps, it.t, sched);
        Vec2 target = sched.alpha_dot(it.t) * it.x0 + sched.sigma_dot(it.t) * it.eps;
        Vec2 v = velocity_fwd(p, xt, it.t, it.condition, tape);
        Vec2 r = v - target;
        out.loss += dot(r, r) * inv_b;
        velocity_backward_params(p, tape, 2.0 * inv_b * r, out.grad);
    }
    if (!std::isfinite(out.loss))
        raise(ErrorKind::DivergenceDetected, "cfm loss non-finite");
    return out;
}

LossGrad cfm_loss_and_grad(const FlowParams& p, std::span<const ToySample> batch,
                           numkit::RandomStream& stream, const NoiseSchedule& sched) {
    std::vector<CfmItem> items(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        items[i].x0 = batch[i].x0;
        items[i].condition = batch[i].condition;
        items[i].t = stream.next_uniform();
        items[i].eps = {stream.next_gaussian(), stream.next_gaussian()};
    }
    return cfm_loss_and_grad_at(p, items, sched);
}

FlowParams train_flow(const ToyDatasetSpec& spec, const FlowTrainConfig& cfg,
                      numkit::RandomStream& stream, std::vector<double>* trace) {
    if (cfg.steps < 1 || cfg.batch < 1)
        raise(ErrorKind::ConfigError, "train_flow: steps and batch must be >= 1");
    NoiseSchedule sched = rectified_schedule();
    FlowParams p = init_params({spec.mode_count, cfg.hidden_width}, stream);
    std::vector<ToySample> data = make_dataset(spec, stream);
    AdamState opt(p.w.size());
    std::vector<ToySample> batch(static_cast<std::size_t>(cfg.batch));
    for (int step = 0; step < cfg.steps; ++step) {
        for (auto& b : batch) b = data[stream.next_below(data.size())];
        LossGrad lg = cfm_loss_and_grad(p, batch, stream, sched);
        clip_global_norm(lg.grad, cfg.grad_clip);
        adam_step(p.w, lg.grad, opt, cfg.adam);
        if (trace) trace->push_back(lg.loss);
    }
    for (double w : p.w)
        if (!std::isfinite(w)) raise(ErrorKind::DivergenceDetected, "train_flow: non-finite weights");
    return p;
}

Vec2 euler_integrate(const std::function<Vec2(Vec2, double)>& field, Vec2 x1, int steps) {
    if (steps < 1)
        raise(ErrorKind::DomainError, "euler_integrate: steps must be >= 1");
    double h = 1.0 / static_cast<double>(steps);
    Vec2 x = x1;
    for (int k = 0; k < steps; ++k) {
        double t = 1.0 - static_cast<double>(k) * h;
        x -= h * field(x, t);
        if (!finite(x))
            raise(ErrorKind::NonFiniteState, "euler_integrate: state diverged at step " +
                                                 std::to_string(k));
    }
    return x;
}

Vec2 ode_sample(const FlowParams& p, int condition, int steps, numkit::RandomStream& stream) {
    Vec2 x1{stream.next_gaussian(), stream.next_gaussian()};
    return euler_integrate(
        [&](Vec2 x, double t) { return velocity(p, x, t, condition); }, x1, steps);
}

std::vector<Vec2> sample_batch(const FlowParams& p, std::span<const int> conditions, int steps,
                               const numkit::RandomStream& base, bool serial_reference) {
    std::vector<Vec2> out(conditions.size());
    // Each slot is an independent substream, so scheduling order cannot leak
    // into the values.
    if (serial_reference) {
        for (std::size_t i = 0; i < conditions.size(); ++i) {
            numkit::RandomStream s = base.fork(i);
            out[i] = ode_sample(p, conditions[i], steps, s);
        }
        return out;
    }
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(conditions.size()); ++i) {
        numkit::RandomStream s = base.fork(static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] =
            ode_sample(p, conditions[static_cast<std::size_t>(i)], steps, s);
    }
    return out;
}

namespace {

constexpr double kDestFloor = 1e-3;

} // namespace

Vec2 one_step_reconstruct_fwd(const FlowParams& p, Vec2 x0, Vec2 eps_gt, double t, int condition,
                              const NoiseSchedule& sched, double delta, NetTape& tape,
                              double* dcoef) {
    if (!(t > 0.0 && t <= 1.0))
        raise(ErrorKind::TimeOutOfRange, "one_step_reconstruct: t = " + std::to_string(t));
    if (!(delta > 0.0))
        raise(ErrorKind::DomainError, "one_step_reconstruct: delta must be positive");
    Vec2 xt = forward_noise(x0, eps_gt, t, sched);
    Vec2 v = velocity_fwd(p, xt, t, condition, tape);
    double t_dst = std::max(t - delta, kDestFloor);
    double step = t - t_dst;
    double a = sched.alpha(t_dst);
    if (!(a > 1e-12))
        raise(ErrorKind::AlphaUnderflow,
              "one_step_reconstruct: alpha(" + std::to_string(t_dst) + ") = " + std::to_string(a));
    Vec2 x_dst = xt - step * v;
    if (dcoef) *dcoef = -step / a;
    return (x_dst - sched.sigma(t_dst) * eps_gt) / a;
}

Vec2 one_step_reconstruct(const FlowParams& p, Vec2 x0, Vec2 eps_gt, double t, int condition,
                          const NoiseSchedule& sched, double delta) {
    NetTape tape;
    return one_step_reconstruct_fwd(p, x0, eps_gt, t, condition, sched, delta, tape, nullptr);
}

} // namespace divlab::flowgen
