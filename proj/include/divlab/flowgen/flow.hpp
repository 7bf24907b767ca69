#pragma once

#include <functional>
#include <span>
#include <vector>

#include "divlab/flowgen/optim.hpp"
#include "divlab/flowgen/schedule.hpp"
#include "divlab/flowgen/velocity_net.hpp"
#include "divlab/numkit/rng.hpp"

namespace divlab::flowgen {

struct ToySample {
    Vec2 x0;
    int condition = 0;
};

// Gaussian blobs centered on a ring, one mode per condition.
struct ToyDatasetSpec {
    int mode_count = 8;
    double mode_radius = 4.0;
    double mode_sigma = 0.25;
    int samples_per_mode = 256;
};

Vec2 mode_center(const ToyDatasetSpec& spec, int k);

// mode_count * samples_per_mode points, mode-major order; two gaussian draws
// per point.
std::vector<ToySample> make_dataset(const ToyDatasetSpec& spec, numkit::RandomStream& stream);

Vec2 forward_noise(Vec2 x0, Vec2 eps, double t, const NoiseSchedule& sched);

// Batch element with the randomness already drawn; the deterministic core of
// the regression loss, also the seam the finite-difference tests drive.
struct CfmItem {
    Vec2 x0;
    int condition = 0;
    double t = 0.5;
    Vec2 eps;
};

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

LossGrad cfm_loss_and_grad_at(const FlowParams& p, std::span<const CfmItem> batch,
                              const NoiseSchedule& sched);

// Draws (t, eps) per element from the stream (t uniform, eps two gaussians),
// then scores via the _at core.
LossGrad cfm_loss_and_grad(const FlowParams& p, std::span<const ToySample> batch,
                           numkit::RandomStream& stream, const NoiseSchedule& sched);

struct FlowTrainConfig {
    int steps = 5000;
    int batch = 64;
    int hidden_width = 64;
    AdamConfig adam{1e-3, 0.9, 0.999, 1e-8, 1e-4};
    double grad_clip = 0.0; // off by default for pretraining
};

// Deterministic given the stream: init, dataset, batch indices and per-item
// noise all come from it in a fixed order. Per-step losses go to trace when
// it is non-null.
FlowParams train_flow(const ToyDatasetSpec& spec, const FlowTrainConfig& cfg,
                      numkit::RandomStream& stream, std::vector<double>* trace = nullptr);

// Euler integration of dx/dt = field(x, t) from t = 1 down to t = 0.
Vec2 euler_integrate(const std::function<Vec2(Vec2, double)>& field, Vec2 x1, int steps);

// Starts from a standard gaussian draw (two stream gaussians) at t = 1.
Vec2 ode_sample(const FlowParams& p, int condition, int steps, numkit::RandomStream& stream);

// One sample per condition entry, sample i on base.fork(i); parallel across
// samples unless serial_reference, identical output either way.
std::vector<Vec2> sample_batch(const FlowParams& p, std::span<const int> conditions, int steps,
                               const numkit::RandomStream& base, bool serial_reference = false);

// Noise x0 to time t with the ground-truth eps, take a single Euler step of
// the learned ODE to t' = max(t - delta, 1e-3), then invert the path at t'
// using the same ground-truth eps. The destination floor keeps a positive
// step even for t near 0.
Vec2 one_step_reconstruct(const FlowParams& p, Vec2 x0, Vec2 eps_gt, double t, int condition,
                          const NoiseSchedule& sched, double delta);

// Same computation, but also exposes what the alignment backward pass needs:
// d(x0_hat)/d(v_hat) = dcoef * I and the activation tape of the one network
// evaluation.
Vec2 one_step_reconstruct_fwd(const FlowParams& p, Vec2 x0, Vec2 eps_gt, double t, int condition,
                              const NoiseSchedule& sched, double delta, NetTape& tape,
                              double* dcoef);

} // namespace divlab::flowgen
