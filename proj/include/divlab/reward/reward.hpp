#pragma once

#include <vector>

#include "divlab/flowgen/flow.hpp"
#include "divlab/numkit/rng.hpp"
#include "divlab/numkit/vec.hpp"

namespace divlab::reward {

using numkit::RealVector;
using flowgen::Vec2;

// Toy dual encoder over the 2-d sample space. The image side is a smooth
// 2 -> dim map, z(x) = W x + b + s * tanh(V x + c), normalized to the unit
// sphere. The text side is a lookup table, one unit vector per condition,
// built from the image encodings of the mode centers so that text and image
// branches agree on clean data. The planted defect lives purely on the text
// side: the biased encoder adds beta * u_bias before normalizing.
struct RewardSpec {
    int condition_count = 8;
    int dim = 16;

    std::vector<double> w_lin; // dim x 2, row-major
    std::vector<double> b_lin; // dim
    std::vector<double> v_nl;  // dim x 2, row-major
    std::vector<double> c_nl;  // dim
    std::vector<double> s_nl;  // dim

    std::vector<RealVector> text_table; // condition_count unit vectors
    RealVector u_bias;                  // unit
    double beta = 0.6;
};

RewardSpec make_reward_spec(const flowgen::ToyDatasetSpec& dataset, int dim, double beta,
                            numkit::RandomStream& stream);

RealVector encode_image(const RewardSpec& spec, Vec2 x);
RealVector encode_text(const RewardSpec& spec, int condition, bool biased);

// Plain cosine similarity between embeddings.
double score(const RealVector& e_img, const RealVector& e_text);

struct GuidanceConfig {
    double omega = 1.5; // must be >= 1
};

void validate(const GuidanceConfig& g);

// e_minus + omega * (e_plus - e_minus) with e_pm = normalize(e_text +- b);
// deliberately not re-normalized.
RealVector guided_embedding(const RealVector& e_text, const RealVector& b,
                            const GuidanceConfig& g);

double guided_reward(const RewardSpec& spec, Vec2 x, int condition, const RealVector& b,
                     const GuidanceConfig& g, bool biased);

RealVector grad_guided_reward_wrt_b(const RewardSpec& spec, Vec2 x, int condition,
                                    const RealVector& b, const GuidanceConfig& g, bool biased);

Vec2 grad_guided_reward_wrt_x(const RewardSpec& spec, Vec2 x, int condition,
                              const RealVector& b, const GuidanceConfig& g, bool biased);

// One pass computing the reward and both gradients (either output optional).
double guided_reward_and_grads(const RewardSpec& spec, Vec2 x, int condition,
                               const RealVector& b, const GuidanceConfig& g, bool biased,
                               RealVector* grad_b, Vec2* grad_x);

} // namespace divlab::reward
