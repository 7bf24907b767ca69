#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "divlab/bench/metrics.hpp"
#include "divlab/numkit/rng.hpp"

using namespace divlab;
using namespace divlab::bench;
using numkit::RandomStream;
using numkit::RealVector;

namespace {

FeatureRecord feat(std::string id, RealVector v) {
    return {std::move(id), "p", std::move(v)};
}

std::vector<FeatureRecord> gaussian_feats(int n, int dim, RandomStream& rs, const char* tag) {
    std::vector<FeatureRecord> out;
    for (int i = 0; i < n; ++i) {
        RealVector v(static_cast<std::size_t>(dim));
        for (auto& x : v) x = rs.next_gaussian();
        out.push_back(feat(std::string(tag) + std::to_string(i), std::move(v)));
    }
    return out;
}

// --- independent oracles, coded with different algorithms on purpose ---

double oracle_ids(const std::vector<FeatureRecord>& feats) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        for (std::size_t j = i + 1; j < feats.size(); ++j) {
            sum += numkit::cosine(feats[i].vector, feats[j].vector);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

int oracle_nearest(const std::vector<FeatureRecord>& train, const RealVector& q) {
    // max similarity rather than min distance; strict > keeps the lowest index
    int best = 0;
    double best_sim = numkit::cosine(train[0].vector, q);
    for (std::size_t k = 1; k < train.size(); ++k) {
        double s = numkit::cosine(train[k].vector, q);
        if (s > best_sim) {
            best_sim = s;
            best = static_cast<int>(k);
        }
    }
    return best;
}

// Occupancy pmf by forward dynamic programming over draws in linear space:
// p[k] after m draws over s categories. Exact for the small sizes used here.
std::vector<double> oracle_occupancy_pmf(int n, int s) {
    std::vector<double> p(static_cast<std::size_t>(std::min(n, s)) + 1, 0.0);
    p[0] = 1.0;
    for (int m = 0; m < n; ++m) {
        std::vector<double> q(p.size(), 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] == 0.0) continue;
            double stay = static_cast<double>(k) / s;
            q[k] += p[k] * stay;
            if (k + 1 < p.size()) q[k + 1] += p[k] * (1.0 - stay);
        }
        p = std::move(q);
    }
    return p;
}

int oracle_mle(int k, int n, int s_max) {
    int best_s = k;
    double best_p = -1.0;
    for (int s = k; s <= s_max; ++s) {
        double p = oracle_occupancy_pmf(n, s)[static_cast<std::size_t>(k)];
        if (p > best_p) {
            best_p = p;
            best_s = s;
        }
    }
    return best_s;
}

double oracle_asc(const std::vector<FeatureRecord>& train, const std::vector<FeatureRecord>& test,
                  const std::vector<FeatureRecord>& synth) {
    auto learned = [&](const std::vector<FeatureRecord>& queries) {
        std::set<int> uniq;
        for (const auto& q : queries) uniq.insert(oracle_nearest(train, q.vector));
        return static_cast<int>(uniq.size());
    };
    int n_train = static_cast<int>(train.size());
    int s_test = oracle_mle(learned(test), static_cast<int>(test.size()), n_train);
    int s_synth = oracle_mle(learned(synth), static_cast<int>(synth.size()), n_train);
    return (static_cast<double>(s_synth) / n_train) / (static_cast<double>(s_test) / n_train);
}

double oracle_layout_sim(const std::vector<Box>& a, const std::vector<Box>& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    // brute-force assignment over the smaller side
    bool a_small = a.size() <= b.size();
    const auto& small = a_small ? a : b;
    const auto& large = a_small ? b : a;
    std::vector<std::size_t> perm(large.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < small.size(); ++i)
            total += iou(small[i], large[perm[i]]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(std::max(a.size(), b.size()));
}

double oracle_sdi(const BoxGroups& groups) {
    double outer = 0.0;
    for (const auto& [key, sets] : groups) {
        double inner = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (std::size_t j = i + 1; j < sets.size(); ++j) {
                inner += 1.0 - oracle_layout_sim(sets[i].boxes, sets[j].boxes);
                ++pairs;
            }
        }
        outer += inner / static_cast<double>(pairs);
    }
    return outer / static_cast<double>(groups.size());
}

Box box(double x0, double y0, double x1, double y1) { return {x0, y0, x1, y1}; }

BoxSet set_of(std::string prompt, std::vector<Box> boxes) {
    BoxSet s;
    s.image_id = "img";
    s.prompt_id = std::move(prompt);
    s.boxes = std::move(boxes);
    return s;
}

} // namespace

TEST_CASE("ids fixtures") {
    // clones: every pairwise cosine is 1
    std::vector<FeatureRecord> clones{feat("a", {1.0, 2.0}), feat("b", {1.0, 2.0}),
                                      feat("c", {1.0, 2.0})};
    CHECK(ids(clones) == doctest::Approx(1.0).epsilon(1e-12));

    // three-vector hand fixture
    std::vector<FeatureRecord> tri{feat("a", {1.0, 0.0}), feat("b", {0.0, 1.0}),
                                   feat("c", {1.0, 1.0})};
    CHECK(ids(tri) == doctest::Approx(0.4714045207910317).epsilon(1e-9));

    // duplicates are counted, not collapsed: adding a clone raises the score
    auto tri_plus = tri;
    tri_plus.push_back(feat("d", {1.0, 1.0}));
    CHECK(ids(tri_plus) > ids(tri));
}

TEST_CASE("ids error paths") {
    std::vector<FeatureRecord> empty;
    try {
        static_cast<void>(ids(empty));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySet);
    }
    std::vector<FeatureRecord> one{feat("a", {1.0, 0.0})};
    try {
        static_cast<void>(ids(one));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TooFewSamples);
    }
    std::vector<FeatureRecord> ragged{feat("a", {1.0, 0.0}), feat("b", {1.0, 0.0, 0.0})};
    CHECK_THROWS_AS(static_cast<void>(ids(ragged)), Error);
    std::vector<FeatureRecord> zero{feat("a", {1.0, 0.0}), feat("b", {0.0, 0.0})};
    try {
        static_cast<void>(ids(zero));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroNorm);
    }
    std::vector<FeatureRecord> nan{feat("a", {1.0, 0.0}),
                                   feat("b", {std::nan(""), 0.0})};
    CHECK_THROWS_AS(static_cast<void>(ids(nan)), Error);
}

TEST_CASE("ids against the independent accumulator and its serial twin") {
    RandomStream rs(2);
    auto feats = gaussian_feats(61, 12, rs, "f");
    double a = ids(feats);
    double b = ids_serial(feats);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0); // bit-identical by construction
    CHECK(a == doctest::Approx(oracle_ids(feats)).epsilon(1e-12));
}

TEST_CASE("nearest neighbor ties break to the lowest train index") {
    std::vector<FeatureRecord> train{feat("t0", {1.0, 0.0}), feat("t1", {1.0, 0.0}),
                                     feat("t2", {0.0, 1.0}), feat("t3", {0.0, 1.0})};
    std::vector<FeatureRecord> queries{feat("q0", {2.0, 0.0}), feat("q1", {0.0, 3.0}),
                                       feat("q2", {1.0, 1.0})};
    auto idx = nearest_train_indices(train, queries);
    REQUIRE(idx.size() == 3);
    CHECK(idx[0] == 0); // exact tie between t0 and t1
    CHECK(idx[1] == 2); // exact tie between t2 and t3
    CHECK(idx[2] == 0); // four-way tie at cos = 1/sqrt(2)
}

TEST_CASE("nearest neighbor matches the similarity oracle") {
    RandomStream rs(13);
    auto train = gaussian_feats(40, 6, rs, "t");
    auto queries = gaussian_feats(70, 6, rs, "q");
    auto idx = nearest_train_indices(train, queries);
    auto idx_serial = nearest_train_indices_serial(train, queries);
    CHECK(idx == idx_serial);
    for (std::size_t i = 0; i < queries.size(); ++i)
        CHECK(idx[i] == oracle_nearest(train, queries[i].vector));
}

TEST_CASE("asc identity and collapse fixtures") {
    RandomStream rs(5);
    auto train = gaussian_feats(50, 8, rs, "t");
    auto test = gaussian_feats(40, 8, rs, "x");
    CHECK(asc(train, test, test) == doctest::Approx(1.0).epsilon(1e-12));

    // synthetic set glued to one training item: learned = 1, s* = 1,
    // IRS = 1/50
    std::vector<FeatureRecord> collapsed(100, feat("s", train[17].vector));
    auto full_test = train; // retrieves everything: s*_test = 50, IRS_test = 1
    auto br = asc_breakdown(train, full_test, collapsed);
    CHECK(br.learned_synth == 1);
    CHECK(br.s_star_synth == 1);
    CHECK(br.irs_synth == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(br.learned_test == 50);
    CHECK(br.irs_test == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(br.value == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("asc full pipeline against the independent oracle") {
    RandomStream rs(20);
    auto train = gaussian_feats(20, 8, rs, "t");
    auto test = gaussian_feats(30, 8, rs, "x");
    auto synth = gaussian_feats(30, 8, rs, "s");
    double v = asc(train, test, synth);
    double vs = asc_serial(train, test, synth);
    CHECK(std::memcmp(&v, &vs, sizeof v) == 0);
    CHECK(std::abs(v - oracle_asc(train, test, synth)) < 1e-9);
}

TEST_CASE("iou fixtures") {
    CHECK(iou(box(0, 0, 10, 10), box(0, 0, 10, 10)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(iou(box(0, 0, 10, 10), box(5, 0, 15, 10)) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(iou(box(0, 0, 1, 1), box(5, 5, 6, 6)) == 0.0);
    // edge contact has zero area overlap
    CHECK(iou(box(0, 0, 1, 1), box(1, 0, 2, 1)) == 0.0);

    CHECK_THROWS_AS(check_box(box(0, 0, 0, 1)), Error);            // zero width
    CHECK_THROWS_AS(check_box(box(0, 0, -1, 1)), Error);           // negative extent
    CHECK_THROWS_AS(check_box(box(0, 0, std::nan(""), 1)), Error); // non-finite
    CHECK_NOTHROW(check_box(box(-5, -5, 5, 5)));
}

TEST_CASE("layout similarity conventions") {
    std::vector<Box> a{box(0, 0, 10, 10)};
    std::vector<Box> empty;
    CHECK(layout_similarity(empty, empty) == 1.0);
    CHECK(layout_similarity(a, empty) == 0.0);
    CHECK(layout_similarity(empty, a) == 0.0);
    CHECK(layout_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-12));

    // one box vs the same box plus a far one: 1 matched IoU over max(1,2)
    std::vector<Box> two{box(0, 0, 10, 10), box(20, 20, 30, 30)};
    CHECK(layout_similarity(a, two) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sdi fixtures") {
    std::vector<Box> layout{box(0, 0, 10, 10), box(20, 0, 30, 10)};
    std::vector<Box> shifted{box(100, 100, 110, 110), box(120, 100, 130, 110)};

    BoxGroups identical{{"p0", {set_of("p0", layout), set_of("p0", layout)}}};
    CHECK(sdi(identical) == doctest::Approx(0.0).epsilon(1e-12));

    BoxGroups disjoint{{"p0", {set_of("p0", layout), set_of("p0", shifted)}}};
    CHECK(sdi(disjoint) == doctest::Approx(1.0).epsilon(1e-12));

    BoxGroups asym{{"p0", {set_of("p0", {box(0, 0, 10, 10)}),
                           set_of("p0", {box(0, 0, 10, 10), box(20, 20, 30, 30)})}}};
    CHECK(sdi(asym) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sdi against the brute-force oracle") {
    RandomStream rs(31);
    BoxGroups groups;
    for (int g = 0; g < 5; ++g) {
        auto& sets = groups["g" + std::to_string(g)];
        int n_sets = 2 + static_cast<int>(rs.next_below(3));
        for (int s = 0; s < n_sets; ++s) {
            std::vector<Box> boxes;
            int n_boxes = static_cast<int>(rs.next_below(4)); // 0..3, empties included
            for (int b = 0; b < n_boxes; ++b) {
                double x = 50.0 * rs.next_uniform(), y = 50.0 * rs.next_uniform();
                boxes.push_back(box(x, y, x + 1.0 + 10.0 * rs.next_uniform(),
                                    y + 1.0 + 10.0 * rs.next_uniform()));
            }
            sets.push_back(set_of("g" + std::to_string(g), std::move(boxes)));
        }
    }
    double v = sdi(groups);
    double vs = sdi_serial(groups);
    CHECK(std::memcmp(&v, &vs, sizeof v) == 0);
    CHECK(v == doctest::Approx(oracle_sdi(groups)).epsilon(1e-9));
}

TEST_CASE("sdi group errors") {
    BoxGroups none;
    try {
        static_cast<void>(sdi(none));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySet);
    }
    BoxGroups lonely{{"solo", {set_of("solo", {box(0, 0, 1, 1)})}}};
    try {
        static_cast<void>(sdi(lonely));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GroupTooSmall);
        CHECK(std::string(e.what()).find("solo") != std::string::npos);
    }
}

TEST_CASE("pvs fixtures") {
    TonalTriple dark{0.0, 0.0, 0.0};
    TonalTriple bright{1.0, 1.0, 1.0};

    TonalGroups same{{"p", {dark, dark, dark}}};
    CHECK(pvs(same) == doctest::Approx(0.0).epsilon(1e-12));

    // two extremes: each channel has population std 0.5, summing to 1.5
    TonalGroups extremes{{"p", {dark, bright}}};
    CHECK(pvs(extremes) == doctest::Approx(1.5).epsilon(1e-12));

    // mean over groups
    TonalGroups both{{"a", {dark, bright}}, {"b", {dark, dark}}};
    CHECK(pvs(both) == doctest::Approx(0.75).epsilon(1e-12));

    double v = pvs(both);
    double vs = pvs_serial(both);
    CHECK(std::memcmp(&v, &vs, sizeof v) == 0);

    TonalGroups lonely{{"only", {dark}}};
    try {
        static_cast<void>(pvs(lonely));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GroupTooSmall);
        CHECK(std::string(e.what()).find("only") != std::string::npos);
    }
}

TEST_CASE("population std") {
    CHECK(population_std({1.0, 1.0, 1.0}) == 0.0);
    CHECK(population_std({0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    // population, not sample: divide by n
    CHECK(population_std({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(static_cast<void>(population_std({})), Error);
}
