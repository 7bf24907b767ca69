#include "divlab/align/align.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "divlab/error.hpp"

namespace divlab::align {

namespace {

using flowgen::NoiseSchedule;
using flowgen::rectified_schedule;
using numkit::RandomStream;

// Substream tags; CLI-visible determinism depends on these staying fixed.
constexpr std::uint64_t kStage1Stream = 1;
constexpr std::uint64_t kStage2Stream = 2;
constexpr std::uint64_t kEvalStream = 3;

void check_pair(const RewardSpec& spec, const ToyDatasetSpec& dataset) {
    if (spec.condition_count != dataset.mode_count)
        raise(ErrorKind::ConfigError, "reward spec and dataset disagree on condition count");
}

Vec2 draw_x0(const FlowParams& gen, const ToyDatasetSpec& dataset, const AlignConfig& cfg,
             int condition, RandomStream& stream) {
    if (cfg.stage1_from_dataset) {
        Vec2 d{stream.next_gaussian(), stream.next_gaussian()};
        return flowgen::mode_center(dataset, condition) + dataset.mode_sigma * d;
    }
    return flowgen::ode_sample(gen, condition, cfg.sample_steps, stream);
}

} // namespace

void validate(const AlignConfig& cfg) {
    if (!(cfg.omega >= 1.0))
        raise(ErrorKind::ConfigError, "omega must be >= 1, got " + std::to_string(cfg.omega));
    if (cfg.stage1_steps < 1 || cfg.stage2_steps < 1)
        raise(ErrorKind::ConfigError, "step counts must be >= 1");
    if (!(cfg.lr_bv > 0.0) || !(cfg.lr_gen > 0.0))
        raise(ErrorKind::ConfigError, "learning rates must be positive");
    if (cfg.batch < 1) raise(ErrorKind::ConfigError, "batch must be >= 1");
    if (cfg.grad_clip < 0.0) raise(ErrorKind::ConfigError, "grad_clip must be >= 0");
    if (!(cfg.delta_ode > 0.0 && cfg.delta_ode <= 1.0))
        raise(ErrorKind::ConfigError, "delta_ode must be in (0, 1]");
    if (cfg.sample_steps < 1 || cfg.eval_steps < 1)
        raise(ErrorKind::ConfigError, "sampler step counts must be >= 1");
}

std::string trace_csv(const std::vector<StepRecord>& trace) {
    std::string out = "step,loss,reward_biased,reward_true\n";
    char buf[160];
    for (const StepRecord& r : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.step, r.loss,
                      r.reward_biased, r.reward_true);
        out += buf;
    }
    return out;
}

RealVector stage1_learn_bv(const FlowParams& gen, const RewardSpec& spec,
                           const ToyDatasetSpec& dataset, const AlignConfig& cfg,
                           std::vector<StepRecord>* trace) {
    check_pair(spec, dataset);
    RealVector b(static_cast<std::size_t>(spec.dim), 0.0);
    if (cfg.stage1_steps == 0) return b;

    NoiseSchedule sched = rectified_schedule();
    reward::GuidanceConfig g{cfg.omega};
    RandomStream stream = RandomStream(cfg.seed).fork(kStage1Stream);
    flowgen::AdamState opt(b.size());
    flowgen::AdamConfig adam{cfg.lr_bv, 0.9, 0.999, 1e-8, 0.0};
    double inv_b = 1.0 / static_cast<double>(cfg.batch);

    RealVector grad(b.size()), gb;
    for (int step = 0; step < cfg.stage1_steps; ++step) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0, rb = 0.0, rt = 0.0;
        for (int j = 0; j < cfg.batch; ++j) {
            int c = static_cast<int>(stream.next_below(
                static_cast<std::uint64_t>(spec.condition_count)));
            Vec2 x0 = draw_x0(gen, dataset, cfg, c, stream);
            Vec2 eps{stream.next_gaussian(), stream.next_gaussian()};
            double t = 1.0 - stream.next_uniform();
            Vec2 xh = flowgen::one_step_reconstruct(gen, x0, eps, t, c, sched, cfg.delta_ode);
            double r = reward::guided_reward_and_grads(spec, xh, c, b, g, true, &gb, nullptr);
            loss -= r * inv_b;
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= gb[i] * inv_b;
            RealVector ei = reward::encode_image(spec, xh);
            rb += reward::score(ei, reward::encode_text(spec, c, true)) * inv_b;
            rt += reward::score(ei, reward::encode_text(spec, c, false)) * inv_b;
        }
        flowgen::clip_global_norm(grad, cfg.grad_clip);
        flowgen::adam_step(b, grad, opt, adam);
        if (!numkit::all_finite(b))
            raise(ErrorKind::DivergenceDetected, "stage 1 diverged at step " + std::to_string(step));
        if (trace) trace->push_back({step, loss, rb, rt});
    }
    return b;
}

FlowParams stage2_align(const FlowParams& gen, const RealVector& b_star, const RewardSpec& spec,
                        const ToyDatasetSpec& dataset, const AlignConfig& cfg,
                        std::vector<StepRecord>* trace) {
    check_pair(spec, dataset);
    if (b_star.size() != static_cast<std::size_t>(spec.dim))
        raise(ErrorKind::LengthMismatch, "stage 2: b_star has wrong size");
    FlowParams p = gen;
    if (cfg.stage2_steps == 0) return p;

    NoiseSchedule sched = rectified_schedule();
    reward::GuidanceConfig g{cfg.omega};
    RandomStream stream = RandomStream(cfg.seed).fork(kStage2Stream);
    flowgen::AdamState opt(p.w.size());
    flowgen::AdamConfig adam{cfg.lr_gen, 0.9, 0.999, 1e-8, 0.0};
    double inv_b = 1.0 / static_cast<double>(cfg.batch);

    std::vector<double> grad(p.w.size());
    flowgen::NetTape tape;
    for (int step = 0; step < cfg.stage2_steps; ++step) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0, rb = 0.0, rt = 0.0;
        for (int j = 0; j < cfg.batch; ++j) {
            int c = static_cast<int>(stream.next_below(
                static_cast<std::uint64_t>(spec.condition_count)));
            // The sampling chain is treated as data; only the one-step
            // reconstruction is differentiated.
            Vec2 x0 = flowgen::ode_sample(p, c, cfg.sample_steps, stream);
            Vec2 eps{stream.next_gaussian(), stream.next_gaussian()};
            double t = 1.0 - stream.next_uniform();
            double dcoef = 0.0;
            Vec2 xh = flowgen::one_step_reconstruct_fwd(p, x0, eps, t, c, sched, cfg.delta_ode,
                                                        tape, &dcoef);
            Vec2 gx;
            double r = reward::guided_reward_and_grads(spec, xh, c, b_star, g, true, nullptr, &gx);
            loss -= r * inv_b;
            flowgen::velocity_backward_params(p, tape, (-dcoef * inv_b) * gx, grad);
            RealVector ei = reward::encode_image(spec, xh);
            rb += reward::score(ei, reward::encode_text(spec, c, true)) * inv_b;
            rt += reward::score(ei, reward::encode_text(spec, c, false)) * inv_b;
        }
        flowgen::clip_global_norm(grad, cfg.grad_clip);
        flowgen::adam_step(p.w, grad, opt, adam);
        if (!numkit::all_finite(p.w))
            raise(ErrorKind::DivergenceDetected, "stage 2 diverged at step " + std::to_string(step));
        if (trace) trace->push_back({step, loss, rb, rt});
    }
    return p;
}

Diagnostics diagnostics_from_samples(std::span<const Vec2> samples, std::span<const int> conditions,
                                     const ToyDatasetSpec& dataset, const RewardSpec& spec,
                                     const RealVector& b) {
    check_pair(spec, dataset);
    if (samples.size() != conditions.size())
        raise(ErrorKind::LengthMismatch, "diagnostics: samples vs conditions");
    if (samples.empty()) raise(ErrorKind::TooFewSamples, "diagnostics: no samples");

    int K = dataset.mode_count;
    std::vector<Vec2> centers(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) centers[static_cast<std::size_t>(k)] = mode_center(dataset, k);

    std::vector<std::int64_t> hist(static_cast<std::size_t>(K), 0);
    double hits = 0.0, rt = 0.0, rb = 0.0;
    double thresh = 3.0 * dataset.mode_sigma;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        int c = conditions[i];
        if (c < 0 || c >= K) raise(ErrorKind::UnknownCondition, "diagnostics: condition out of range");
        int best = 0;
        double best_d = dist(samples[i], centers[0]);
        for (int k = 1; k < K; ++k) {
            double dk = dist(samples[i], centers[static_cast<std::size_t>(k)]);
            if (dk < best_d) { // strict: ties stay with the lower index
                best_d = dk;
                best = k;
            }
        }
        hist[static_cast<std::size_t>(best)] += 1;
        if (dist(samples[i], centers[static_cast<std::size_t>(c)]) <= thresh) hits += 1.0;
        RealVector ei = reward::encode_image(spec, samples[i]);
        rt += reward::score(ei, reward::encode_text(spec, c, false));
        rb += reward::score(ei, reward::encode_text(spec, c, true));
    }

    double n = static_cast<double>(samples.size());
    Diagnostics d;
    for (std::int64_t h : hist) {
        if (h == 0) continue;
        double ph = static_cast<double>(h) / n;
        d.mode_entropy -= ph * std::log(ph);
    }
    d.condition_hit_rate = hits / n;
    d.true_reward_mean = rt / n;
    d.biased_reward_mean = rb / n;
    if (numkit::norm2(b) > numkit::kNormEps)
        d.bias_recovery_cos = numkit::cosine(b, numkit::scale(spec.u_bias, -1.0));
    return d;
}

Diagnostics evaluate(const FlowParams& gen, const ToyDatasetSpec& dataset, const RewardSpec& spec,
                     const RealVector& b, const AlignConfig& cfg, int n_eval,
                     bool serial_reference) {
    check_pair(spec, dataset);
    if (n_eval < dataset.mode_count * 100)
        raise(ErrorKind::ConfigError, "evaluate: n_eval must be >= 100 per condition");
    std::vector<int> conditions(static_cast<std::size_t>(n_eval));
    for (std::size_t i = 0; i < conditions.size(); ++i)
        conditions[i] = static_cast<int>(i % static_cast<std::size_t>(dataset.mode_count));
    RandomStream base = RandomStream(cfg.seed).fork(kEvalStream);
    std::vector<Vec2> samples =
        flowgen::sample_batch(gen, conditions, cfg.eval_steps, base, serial_reference);
    return diagnostics_from_samples(samples, conditions, dataset, spec, b);
}

} // namespace divlab::align
