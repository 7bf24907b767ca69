#include "divlab/reward/reward.hpp"

#include <cmath>
#include <string>

namespace divlab::reward {

namespace {

using numkit::kNormEps;

void check_condition(const RewardSpec& spec, int condition) {
    if (condition < 0 || condition >= spec.condition_count)
        raise(ErrorKind::UnknownCondition,
              "condition " + std::to_string(condition) + " of " +
                  std::to_string(spec.condition_count));
}

// Pre-normalization embedding and, on request, its 2-column Jacobian.
RealVector encode_raw(const RewardSpec& spec, Vec2 x, std::vector<double>* jac) {
    std::size_t d = static_cast<std::size_t>(spec.dim);
    RealVector z(d);
    if (jac) jac->assign(d * 2, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double lin = spec.w_lin[2 * i] * x.x + spec.w_lin[2 * i + 1] * x.y + spec.b_lin[i];
        double arg = spec.v_nl[2 * i] * x.x + spec.v_nl[2 * i + 1] * x.y + spec.c_nl[i];
        double th = std::tanh(arg);
        z[i] = lin + spec.s_nl[i] * th;
        if (jac) {
            double dth = spec.s_nl[i] * (1.0 - th * th);
            (*jac)[2 * i] = spec.w_lin[2 * i] + dth * spec.v_nl[2 * i];
            (*jac)[2 * i + 1] = spec.w_lin[2 * i + 1] + dth * spec.v_nl[2 * i + 1];
        }
    }
    return z;
}

} // namespace

RewardSpec make_reward_spec(const flowgen::ToyDatasetSpec& dataset, int dim, double beta,
                            numkit::RandomStream& stream) {
    if (dim < 4) raise(ErrorKind::DomainError, "reward spec: dim must be >= 4");
    if (beta < 0.0) raise(ErrorKind::DomainError, "reward spec: beta must be >= 0");
    RewardSpec spec;
    spec.condition_count = dataset.mode_count;
    spec.dim = dim;
    spec.beta = beta;
    std::size_t d = static_cast<std::size_t>(dim);

    // Scales keep the tanh units out of saturation at mode-radius inputs so
    // the image-side gradients stay alive. The constant offset dominates the
    // linear term so the embedding direction turns slowly across the sample
    // plane; that is what lets a planted bias drag samples a long way.
    spec.w_lin.resize(2 * d);
    for (auto& v : spec.w_lin) v = 0.15 * stream.next_gaussian();
    spec.b_lin.resize(d);
    for (auto& v : spec.b_lin) v = 1.2 * stream.next_gaussian();
    spec.v_nl.resize(2 * d);
    for (auto& v : spec.v_nl) v = 0.25 * stream.next_gaussian();
    spec.c_nl.resize(d);
    for (auto& v : spec.c_nl) v = 0.2 * stream.next_gaussian();
    spec.s_nl.resize(d);
    for (auto& v : spec.s_nl) v = 0.1 + 0.2 * stream.next_uniform();

    spec.text_table.reserve(static_cast<std::size_t>(spec.condition_count));
    for (int k = 0; k < spec.condition_count; ++k)
        spec.text_table.push_back(encode_image(spec, flowgen::mode_center(dataset, k)));

    // The planted bias points from one mode's appearance toward a neighbor's.
    // A direction between two nearby real embeddings gives every condition a
    // consistent pull, which is what makes uncorrected ascent herd samples
    // toward the favored mode. A random direction would mostly fall outside
    // the reachable embedding surface and produce no such herding.
    if (spec.condition_count >= 2) {
        spec.u_bias = numkit::normalize(
            numkit::sub(spec.text_table[0], spec.text_table[1]));
    } else {
        RealVector u(d);
        for (auto& v : u) v = stream.next_gaussian();
        spec.u_bias = numkit::normalize(u);
    }
    return spec;
}

RealVector encode_image(const RewardSpec& spec, Vec2 x) {
    if (!finite(x)) raise(ErrorKind::NonFiniteState, "encode_image: non-finite input");
    return numkit::normalize(encode_raw(spec, x, nullptr));
}

RealVector encode_text(const RewardSpec& spec, int condition, bool biased) {
    check_condition(spec, condition);
    const RealVector& e = spec.text_table[static_cast<std::size_t>(condition)];
    if (!biased || spec.beta == 0.0) return e;
    RealVector shifted = numkit::add(e, numkit::scale(spec.u_bias, spec.beta));
    return numkit::normalize(shifted);
}

double score(const RealVector& e_img, const RealVector& e_text) {
    return numkit::cosine(e_img, e_text);
}

void validate(const GuidanceConfig& g) {
    if (!(g.omega >= 1.0))
        raise(ErrorKind::ConfigError, "omega must be >= 1, got " + std::to_string(g.omega));
}

RealVector guided_embedding(const RealVector& e_text, const RealVector& b,
                            const GuidanceConfig& g) {
    validate(g);
    RealVector ep = numkit::normalize(numkit::add(e_text, b));
    RealVector em = numkit::normalize(numkit::sub(e_text, b));
    RealVector out(e_text.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = em[i] + g.omega * (ep[i] - em[i]);
    return out;
}

double guided_reward_and_grads(const RewardSpec& spec, Vec2 x, int condition,
                               const RealVector& b, const GuidanceConfig& g, bool biased,
                               RealVector* grad_b, Vec2* grad_x) {
    validate(g);
    check_condition(spec, condition);
    std::size_t d = static_cast<std::size_t>(spec.dim);
    if (b.size() != d) raise(ErrorKind::LengthMismatch, "guided reward: b has wrong size");

    RealVector e = encode_text(spec, condition, biased);
    RealVector p = numkit::add(e, b);
    RealVector m = numkit::sub(e, b);
    double np = numkit::norm2(p);
    double nm = numkit::norm2(m);
    if (!(np > kNormEps) || !(nm > kNormEps))
        raise(ErrorKind::ZeroNorm, "guided reward: degenerate e_text +- b");
    RealVector ep = numkit::scale(p, 1.0 / np);
    RealVector em = numkit::scale(m, 1.0 / nm);

    RealVector gv(d);
    for (std::size_t i = 0; i < d; ++i) gv[i] = g.omega * ep[i] + (1.0 - g.omega) * em[i];
    double ng = numkit::norm2(gv);
    if (!(ng > kNormEps)) raise(ErrorKind::ZeroNorm, "guided reward: guided embedding vanished");

    std::vector<double> jac;
    RealVector z = encode_raw(spec, x, grad_x ? &jac : nullptr);
    double nz = numkit::norm2(z);
    if (!(nz > kNormEps)) raise(ErrorKind::ZeroNorm, "guided reward: image embedding vanished");
    RealVector ei = numkit::scale(z, 1.0 / nz);

    double r = numkit::dot(ei, gv) / ng;

    if (grad_b) {
        // dR/dg, then back through both normalize branches; the minus branch
        // enters b with opposite sign.
        RealVector dg(d);
        for (std::size_t i = 0; i < d; ++i) dg[i] = (ei[i] - r * gv[i] / ng) / ng;
        double dp_dot = numkit::dot(ep, dg);
        double dm_dot = numkit::dot(em, dg);
        grad_b->assign(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            double through_p = g.omega * (dg[i] - dp_dot * ep[i]) / np;
            double through_m = (1.0 - g.omega) * (dg[i] - dm_dot * em[i]) / nm;
            (*grad_b)[i] = through_p - through_m;
        }
    }

    if (grad_x) {
        RealVector dz(d);
        double gq = 0.0;
        for (std::size_t i = 0; i < d; ++i) gq += gv[i] * ei[i];
        for (std::size_t i = 0; i < d; ++i) dz[i] = (gv[i] / ng - (gq / ng) * ei[i]) / nz;
        grad_x->x = 0.0;
        grad_x->y = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            grad_x->x += jac[2 * i] * dz[i];
            grad_x->y += jac[2 * i + 1] * dz[i];
        }
    }

    return r;
}

double guided_reward(const RewardSpec& spec, Vec2 x, int condition, const RealVector& b,
                     const GuidanceConfig& g, bool biased) {
    return guided_reward_and_grads(spec, x, condition, b, g, biased, nullptr, nullptr);
}

RealVector grad_guided_reward_wrt_b(const RewardSpec& spec, Vec2 x, int condition,
                                    const RealVector& b, const GuidanceConfig& g, bool biased) {
    RealVector gb;
    guided_reward_and_grads(spec, x, condition, b, g, biased, &gb, nullptr);
    return gb;
}

Vec2 grad_guided_reward_wrt_x(const RewardSpec& spec, Vec2 x, int condition,
                              const RealVector& b, const GuidanceConfig& g, bool biased) {
    Vec2 gx;
    guided_reward_and_grads(spec, x, condition, b, g, biased, nullptr, &gx);
    return gx;
}

} // namespace divlab::reward
