#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "divlab/align/align.hpp"
#include "divlab/numkit/rng.hpp"

using namespace divlab;
using namespace divlab::align;
using numkit::RandomStream;
using numkit::RealVector;

namespace {

struct Fixture {
    ToyDatasetSpec dataset;
    RewardSpec spec;
    FlowParams gen;

    explicit Fixture(std::uint64_t seed = 42, double beta = 0.6) {
        RandomStream rs(seed);
        auto reward_stream = rs.fork(4);
        spec = reward::make_reward_spec(dataset, 16, beta, reward_stream);
        flowgen::NetShape shape;
        shape.condition_count = dataset.mode_count;
        shape.hidden_width = 32;
        auto init = rs.fork(9);
        gen = flowgen::init_params(shape, init);
    }
};

AlignConfig fast_cfg(std::uint64_t seed) {
    AlignConfig cfg;
    cfg.seed = seed;
    cfg.stage1_steps = 400;
    cfg.stage2_steps = 20;
    cfg.sample_steps = 8;
    cfg.eval_steps = 8;
    cfg.stage1_from_dataset = true; // stage 1 without the ODE sampling cost
    return cfg;
}

} // namespace

TEST_CASE("config validation") {
    AlignConfig ok;
    CHECK_NOTHROW(validate(ok));

    auto bad = ok;
    bad.omega = 0.5;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ok;
    bad.stage1_steps = 0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ok;
    bad.lr_bv = 0.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ok;
    bad.grad_clip = -1.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ok;
    bad.delta_ode = 0.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = ok;
    bad.batch = 0;
    CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("stage 1 with zero steps returns the zero initialization") {
    Fixture fx;
    auto cfg = fast_cfg(1);
    cfg.stage1_steps = 0;
    auto b = stage1_learn_bv(fx.gen, fx.spec, fx.dataset, cfg);
    REQUIRE(b.size() == 16);
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("stage 1 learns nothing when no bias was planted") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        Fixture fx(seed, 0.0);
        auto cfg = fast_cfg(seed);
        cfg.stage1_steps = 3000;
        auto b = stage1_learn_bv(fx.gen, fx.spec, fx.dataset, cfg);
        CHECK(numkit::norm2(b) < 0.05);
    }
}

TEST_CASE("stage 1 recovers the planted direction from data-law samples") {
    Fixture fx(42, 0.6);
    auto cfg = fast_cfg(42);
    cfg.stage1_steps = 3000;
    auto b = stage1_learn_bv(fx.gen, fx.spec, fx.dataset, cfg);
    auto minus_u = numkit::scale(fx.spec.u_bias, -1.0);
    CHECK(numkit::cosine(b, minus_u) >= 0.9);
}

TEST_CASE("stage 1 is deterministic and leaves a well-formed trace") {
    Fixture fx;
    auto cfg = fast_cfg(7);
    std::vector<StepRecord> t1, t2;
    auto b1 = stage1_learn_bv(fx.gen, fx.spec, fx.dataset, cfg, &t1);
    auto b2 = stage1_learn_bv(fx.gen, fx.spec, fx.dataset, cfg, &t2);
    CHECK(b1 == b2);
    REQUIRE(t1.size() == 400);
    REQUIRE(t2.size() == 400);
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].step == static_cast<int>(i));
        CHECK(std::memcmp(&t1[i].loss, &t2[i].loss, sizeof(double)) == 0);
    }
    // ascent on the guided reward: the loss trend is downward
    CHECK(t1.back().loss < t1.front().loss);
}

TEST_CASE("stage 2 is deterministic and improves its objective") {
    Fixture fx;
    auto cfg = fast_cfg(3);
    RealVector zero(16, 0.0);
    std::vector<StepRecord> ta, tb;
    auto pa = stage2_align(fx.gen, zero, fx.spec, fx.dataset, cfg, &ta);
    auto pb = stage2_align(fx.gen, zero, fx.spec, fx.dataset, cfg, &tb);
    CHECK(pa.w == pb.w);
    REQUIRE(ta.size() == 20);
    for (std::size_t i = 0; i < ta.size(); ++i)
        CHECK(std::memcmp(&ta[i].reward_biased, &tb[i].reward_biased, sizeof(double)) == 0);
    CHECK(ta.back().loss < ta.front().loss);

    auto bad = zero;
    bad.pop_back();
    CHECK_THROWS_AS(static_cast<void>(stage2_align(fx.gen, bad, fx.spec, fx.dataset, cfg)), Error);
}

TEST_CASE("trace csv shape") {
    std::vector<StepRecord> trace{{0, -0.5, 0.6, 0.7}, {1, -0.6, 0.65, 0.72}};
    auto csv = trace_csv(trace);
    CHECK(csv.find("step,loss,reward_biased,reward_true\n") == 0);
    CHECK(csv.find("\n0,") != std::string::npos);
    CHECK(csv.find("\n1,") != std::string::npos);
    // one header plus one line per record
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("diagnostics degenerate and ideal histograms") {
    Fixture fx;
    const int k = fx.dataset.mode_count;
    std::vector<Vec2> collapsed;
    std::vector<Vec2> faithful;
    std::vector<int> conditions;
    for (int rep = 0; rep < 10; ++rep) {
        for (int c = 0; c < k; ++c) {
            conditions.push_back(c);
            collapsed.push_back(flowgen::mode_center(fx.dataset, 0));
            faithful.push_back(flowgen::mode_center(fx.dataset, c));
        }
    }
    RealVector zero(16, 0.0);

    auto bad = diagnostics_from_samples(collapsed, conditions, fx.dataset, fx.spec, zero);
    CHECK(bad.mode_entropy == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bad.condition_hit_rate == doctest::Approx(1.0 / k).epsilon(1e-12));

    auto good = diagnostics_from_samples(faithful, conditions, fx.dataset, fx.spec, zero);
    CHECK(good.mode_entropy == doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-12));
    CHECK(good.condition_hit_rate == doctest::Approx(1.0).epsilon(1e-12));

    // recovery reads the angle between b and the anti-bias direction
    CHECK(good.bias_recovery_cos == 0.0);
    auto anti = numkit::scale(fx.spec.u_bias, -0.25);
    auto rec = diagnostics_from_samples(faithful, conditions, fx.dataset, fx.spec, anti);
    CHECK(rec.bias_recovery_cos == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<int> short_conditions(conditions.begin(), conditions.end() - 1);
    CHECK_THROWS_AS(static_cast<void>(diagnostics_from_samples(collapsed, short_conditions,
                                                               fx.dataset, fx.spec, zero)),
                    Error);
}

TEST_CASE("evaluate enforces the sample floor and matches its serial reference") {
    Fixture fx;
    auto cfg = fast_cfg(11);
    RealVector zero(16, 0.0);
    try {
        static_cast<void>(evaluate(fx.gen, fx.dataset, fx.spec, zero, cfg, 300));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
    }

    auto par = evaluate(fx.gen, fx.dataset, fx.spec, zero, cfg, 800, false);
    auto ser = evaluate(fx.gen, fx.dataset, fx.spec, zero, cfg, 800, true);
    CHECK(std::memcmp(&par.mode_entropy, &ser.mode_entropy, sizeof(double)) == 0);
    CHECK(std::memcmp(&par.true_reward_mean, &ser.true_reward_mean, sizeof(double)) == 0);
    CHECK(std::memcmp(&par.biased_reward_mean, &ser.biased_reward_mean, sizeof(double)) == 0);
    CHECK(std::memcmp(&par.condition_hit_rate, &ser.condition_hit_rate, sizeof(double)) == 0);
}
