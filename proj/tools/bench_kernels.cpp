// Times the OpenMP kernels against their serial reference implementations on
// synthetic workloads and checks that both produce bit-identical results.
// --smoke shrinks the sizes so the run doubles as a cheap equivalence test.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "divlab/align/align.hpp"
#include "divlab/bench/metrics.hpp"
#include "divlab/flowgen/flow.hpp"
#include "divlab/numkit/rng.hpp"

using namespace divlab;
using bench::FeatureRecord;
using numkit::RandomStream;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::vector<FeatureRecord> make_features(int n, int dim, RandomStream& rs, const char* tag) {
    std::vector<FeatureRecord> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        FeatureRecord rec;
        rec.image_id = std::string(tag) + std::to_string(i);
        rec.prompt_id = "p" + std::to_string(i / 4);
        rec.vector.resize(static_cast<std::size_t>(dim));
        for (auto& v : rec.vector) v = rs.next_gaussian();
        out.push_back(std::move(rec));
    }
    return out;
}

bench::BoxGroups make_box_groups(int groups, int sets_per_group, int boxes_per_set,
                                 RandomStream& rs) {
    bench::BoxGroups g;
    for (int gi = 0; gi < groups; ++gi) {
        auto& vec = g["group" + std::to_string(gi)];
        for (int si = 0; si < sets_per_group; ++si) {
            bench::BoxSet set;
            set.image_id = "img";
            set.prompt_id = "group" + std::to_string(gi);
            for (int bi = 0; bi < boxes_per_set; ++bi) {
                double x = 100.0 * rs.next_uniform();
                double y = 100.0 * rs.next_uniform();
                set.boxes.push_back({x, y, x + 1.0 + 20.0 * rs.next_uniform(),
                                     y + 1.0 + 20.0 * rs.next_uniform()});
            }
            vec.push_back(std::move(set));
        }
    }
    return g;
}

bench::TonalGroups make_tonal_groups(int groups, int per_group, RandomStream& rs) {
    bench::TonalGroups g;
    for (int gi = 0; gi < groups; ++gi) {
        auto& vec = g["group" + std::to_string(gi)];
        for (int i = 0; i < per_group; ++i)
            vec.push_back({rs.next_uniform(), rs.next_uniform(), 0.5 * rs.next_uniform()});
    }
    return g;
}

struct Row {
    const char* name;
    double serial_ms;
    double parallel_ms;
    bool equal;
};

void print_rows(const std::vector<Row>& rows) {
    std::printf("%-14s %12s %12s %9s %6s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "equal");
    for (const auto& r : rows) {
        std::printf("%-14s %12.2f %12.2f %8.2fx %6s\n", r.name, r.serial_ms, r.parallel_ms,
                    r.serial_ms / (r.parallel_ms > 0.0 ? r.parallel_ms : 1e-9),
                    r.equal ? "yes" : "NO");
    }
}

template <typename F>
double timed(F&& f) {
    double t0 = now_ms();
    f();
    return now_ms() - t0;
}

} // namespace

int main(int argc, char** argv) {
    bool smoke = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--smoke") == 0) {
            smoke = true;
        } else {
            std::fprintf(stderr, "usage: bench_kernels [--smoke]\n");
            return 2;
        }
    }

#ifdef _OPENMP
    std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("openmp: compiled out (serial build)\n");
#endif

    const int feat_n = smoke ? 120 : 3000;
    const int feat_dim = 64;
    const int nn_train = smoke ? 100 : 2000;
    const int nn_query = smoke ? 100 : 2000;
    const int box_groups = smoke ? 4 : 48;
    const int box_sets = smoke ? 4 : 10;
    const int boxes_per_set = 6;
    const int tonal_groups_n = smoke ? 4 : 64;
    const int tonal_per_group = smoke ? 8 : 256;
    const int batch_samples = smoke ? 64 : 1500;
    const int ode_steps = 25;

    RandomStream rs(7);
    std::vector<Row> rows;

    {
        auto feats = make_features(feat_n, feat_dim, rs, "f");
        double a = 0.0, b = 0.0;
        double ts = timed([&] { a = bench::ids_serial(feats); });
        double tp = timed([&] { b = bench::ids(feats); });
        rows.push_back({"ids", ts, tp, std::memcmp(&a, &b, sizeof a) == 0});
    }
    {
        auto train = make_features(nn_train, feat_dim, rs, "t");
        auto query = make_features(nn_query, feat_dim, rs, "q");
        std::vector<int> a, b;
        double ts = timed([&] { a = bench::nearest_train_indices_serial(train, query); });
        double tp = timed([&] { b = bench::nearest_train_indices(train, query); });
        rows.push_back({"nearest", ts, tp, a == b});
    }
    {
        auto groups = make_box_groups(box_groups, box_sets, boxes_per_set, rs);
        double a = 0.0, b = 0.0;
        double ts = timed([&] { a = bench::sdi_serial(groups); });
        double tp = timed([&] { b = bench::sdi(groups); });
        rows.push_back({"sdi", ts, tp, std::memcmp(&a, &b, sizeof a) == 0});
    }
    {
        auto groups = make_tonal_groups(tonal_groups_n, tonal_per_group, rs);
        double a = 0.0, b = 0.0;
        double ts = timed([&] { a = bench::pvs_serial(groups); });
        double tp = timed([&] { b = bench::pvs(groups); });
        rows.push_back({"pvs", ts, tp, std::memcmp(&a, &b, sizeof a) == 0});
    }
    {
        flowgen::NetShape shape;
        shape.condition_count = 8;
        shape.hidden_width = 32;
        RandomStream init = rs.fork(1);
        auto params = flowgen::init_params(shape, init);
        std::vector<int> conds(static_cast<std::size_t>(batch_samples));
        for (std::size_t i = 0; i < conds.size(); ++i) conds[i] = static_cast<int>(i % 8);
        RandomStream base = rs.fork(2);
        std::vector<flowgen::Vec2> a, b;
        double ts = timed([&] { a = flowgen::sample_batch(params, conds, ode_steps, base, true); });
        double tp = timed([&] { b = flowgen::sample_batch(params, conds, ode_steps, base, false); });
        bool eq = a.size() == b.size();
        for (std::size_t i = 0; eq && i < a.size(); ++i)
            eq = std::memcmp(&a[i], &b[i], sizeof a[i]) == 0;
        rows.push_back({"sample_batch", ts, tp, eq});
    }

    print_rows(rows);
    for (const auto& r : rows) {
        if (!r.equal) {
            std::fprintf(stderr, "kernel %s: parallel result differs from serial reference\n",
                         r.name);
            return 1;
        }
    }
    return 0;
}
