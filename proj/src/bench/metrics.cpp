#include "divlab/bench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>

#include "divlab/error.hpp"
#include "divlab/numkit/hungarian.hpp"
#include "divlab/numkit/occupancy.hpp"

namespace divlab::bench {

using numkit::cosine;
using numkit::CostMatrix;
using numkit::RealVector;

namespace {

// Cosine (and everything downstream) must not throw inside omp regions, so
// all set-level validation happens up front on one thread.
void check_feature_set(const std::vector<FeatureRecord>& feats, const char* what) {
    if (feats.empty()) raise(ErrorKind::EmptySet, std::string(what) + ": no records");
    const std::size_t d = feats.front().vector.size();
    for (std::size_t i = 0; i < feats.size(); ++i) {
        const RealVector& v = feats[i].vector;
        if (v.size() != d)
            raise(ErrorKind::LengthMismatch, std::string(what) + ": record " + std::to_string(i) +
                                                 " has length " + std::to_string(v.size()) +
                                                 ", expected " + std::to_string(d));
        if (!numkit::all_finite(v))
            raise(ErrorKind::NonFiniteEvaluation,
                  std::string(what) + ": record " + std::to_string(i) + " has non-finite entries");
        if (numkit::norm2(v) <= numkit::kNormEps)
            raise(ErrorKind::ZeroNorm,
                  std::string(what) + ": record " + std::to_string(i) + " has zero norm");
    }
}

double ids_row_sum(const std::vector<FeatureRecord>& feats, std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = i + 1; j < feats.size(); ++j)
        acc += cosine(feats[i].vector, feats[j].vector);
    return acc;
}

// Shared tail: rows are summed in index order so the serial and parallel
// variants produce bit-identical results.
double ids_from_row_sums(const std::vector<double>& rows, std::size_t n) {
    double total = 0.0;
    for (double r : rows) total += r;
    return total * 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
}

void check_ids_input(const std::vector<FeatureRecord>& feats) {
    check_feature_set(feats, "ids");
    if (feats.size() < 2)
        raise(ErrorKind::TooFewSamples, "ids: need at least 2 records, got " +
                                            std::to_string(feats.size()));
}

int nearest_index(const std::vector<FeatureRecord>& train, const RealVector& q) {
    int best = 0;
    double best_dist = 1.0 - cosine(train[0].vector, q);
    for (std::size_t k = 1; k < train.size(); ++k) {
        double d = 1.0 - cosine(train[k].vector, q);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

void check_nn_input(const std::vector<FeatureRecord>& train,
                    const std::vector<FeatureRecord>& queries) {
    check_feature_set(train, "train");
    check_feature_set(queries, "query");
    if (train.front().vector.size() != queries.front().vector.size())
        raise(ErrorKind::LengthMismatch,
              "train dim " + std::to_string(train.front().vector.size()) + " vs query dim " +
                  std::to_string(queries.front().vector.size()));
}

int count_unique(const std::vector<int>& idx) {
    std::set<int> uniq(idx.begin(), idx.end());
    return static_cast<int>(uniq.size());
}

AscBreakdown asc_from_indices(const std::vector<FeatureRecord>& train,
                              const std::vector<int>& test_nn,
                              const std::vector<int>& synth_nn) {
    AscBreakdown r;
    r.n_train = static_cast<int>(train.size());
    r.learned_test = count_unique(test_nn);
    r.learned_synth = count_unique(synth_nn);
    r.s_star_test = static_cast<int>(
        numkit::occupancy_mle(r.learned_test, static_cast<std::int64_t>(test_nn.size()),
                              r.n_train));
    r.s_star_synth = static_cast<int>(
        numkit::occupancy_mle(r.learned_synth, static_cast<std::int64_t>(synth_nn.size()),
                              r.n_train));
    r.irs_test = static_cast<double>(r.s_star_test) / r.n_train;
    r.irs_synth = static_cast<double>(r.s_star_synth) / r.n_train;
    if (r.irs_test <= 0.0)
        raise(ErrorKind::DegenerateReference, "asc: reference retrieval score is zero");
    r.value = r.irs_synth / r.irs_test;
    return r;
}

void check_group_boxes(const std::string& key, const std::vector<BoxSet>& sets) {
    if (sets.size() < 2)
        raise(ErrorKind::GroupTooSmall, "sdi: group '" + key + "' has " +
                                            std::to_string(sets.size()) + " image(s), need >= 2");
    for (const BoxSet& s : sets)
        for (const Box& b : s.boxes) check_box(b);
}

double sdi_group_term(const std::vector<BoxSet>& sets) {
    double sim_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t p = i + 1; p < sets.size(); ++p) {
            sim_sum += layout_similarity(sets[i].boxes, sets[p].boxes);
            ++pairs;
        }
    return 1.0 - sim_sum / static_cast<double>(pairs);
}

double pvs_group_term(const std::vector<TonalTriple>& triples) {
    std::vector<double> s, v, c;
    s.reserve(triples.size());
    v.reserve(triples.size());
    c.reserve(triples.size());
    for (const TonalTriple& t : triples) {
        s.push_back(t.saturation);
        v.push_back(t.brightness);
        c.push_back(t.contrast);
    }
    return population_std(s) + population_std(v) + population_std(c);
}

// Groups are laid out in key order (std::map), each term lands in its own
// slot, and the mean is reduced serially: thread count never changes bytes.
template <typename Group, typename Term>
double mean_over_groups(const std::map<std::string, Group>& groups, Term term, bool parallel) {
    std::vector<const Group*> ordered;
    ordered.reserve(groups.size());
    for (const auto& [key, g] : groups) ordered.push_back(&g);
    std::vector<double> terms(ordered.size(), 0.0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ordered.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t g = 0; g < n; ++g) terms[g] = term(*ordered[g]);
    } else {
        for (std::ptrdiff_t g = 0; g < n; ++g) terms[g] = term(*ordered[g]);
    }
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum / static_cast<double>(terms.size());
}

void check_sdi_input(const BoxGroups& groups) {
    if (groups.empty()) raise(ErrorKind::EmptySet, "sdi: no groups");
    for (const auto& [key, sets] : groups) check_group_boxes(key, sets);
}

void check_pvs_input(const TonalGroups& groups) {
    if (groups.empty()) raise(ErrorKind::EmptySet, "pvs: no groups");
    for (const auto& [key, triples] : groups)
        if (triples.size() < 2)
            raise(ErrorKind::GroupTooSmall, "pvs: group '" + key + "' has " +
                                                std::to_string(triples.size()) +
                                                " image(s), need >= 2");
}

} // namespace

double ids(const std::vector<FeatureRecord>& feats) {
    check_ids_input(feats);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(feats.size());
    std::vector<double> rows(feats.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n - 1; ++i)
        rows[static_cast<std::size_t>(i)] = ids_row_sum(feats, static_cast<std::size_t>(i));
    return ids_from_row_sums(rows, feats.size());
}

double ids_serial(const std::vector<FeatureRecord>& feats) {
    check_ids_input(feats);
    std::vector<double> rows(feats.size(), 0.0);
    for (std::size_t i = 0; i + 1 < feats.size(); ++i) rows[i] = ids_row_sum(feats, i);
    return ids_from_row_sums(rows, feats.size());
}

std::vector<int> nearest_train_indices(const std::vector<FeatureRecord>& train,
                                       const std::vector<FeatureRecord>& queries) {
    check_nn_input(train, queries);
    std::vector<int> idx(queries.size(), 0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        idx[static_cast<std::size_t>(i)] =
            nearest_index(train, queries[static_cast<std::size_t>(i)].vector);
    return idx;
}

std::vector<int> nearest_train_indices_serial(const std::vector<FeatureRecord>& train,
                                              const std::vector<FeatureRecord>& queries) {
    check_nn_input(train, queries);
    std::vector<int> idx(queries.size(), 0);
    for (std::size_t i = 0; i < queries.size(); ++i)
        idx[i] = nearest_index(train, queries[i].vector);
    return idx;
}

AscBreakdown asc_breakdown(const std::vector<FeatureRecord>& train,
                           const std::vector<FeatureRecord>& test,
                           const std::vector<FeatureRecord>& synth) {
    return asc_from_indices(train, nearest_train_indices(train, test),
                            nearest_train_indices(train, synth));
}

double asc(const std::vector<FeatureRecord>& train, const std::vector<FeatureRecord>& test,
           const std::vector<FeatureRecord>& synth) {
    return asc_breakdown(train, test, synth).value;
}

double asc_serial(const std::vector<FeatureRecord>& train, const std::vector<FeatureRecord>& test,
                  const std::vector<FeatureRecord>& synth) {
    return asc_from_indices(train, nearest_train_indices_serial(train, test),
                            nearest_train_indices_serial(train, synth))
        .value;
}

void check_box(const Box& b) {
    if (!std::isfinite(b.x0) || !std::isfinite(b.y0) || !std::isfinite(b.x1) ||
        !std::isfinite(b.y1))
        raise(ErrorKind::DomainError, "box has non-finite coordinates");
    if (!(b.x1 > b.x0) || !(b.y1 > b.y0))
        raise(ErrorKind::DomainError, "box extent must be positive, got (" +
                                          std::to_string(b.x0) + "," + std::to_string(b.y0) +
                                          "," + std::to_string(b.x1) + "," +
                                          std::to_string(b.y1) + ")");
}

double iou(const Box& a, const Box& b) {
    const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double area_a = (a.x1 - a.x0) * (a.y1 - a.y0);
    const double area_b = (b.x1 - b.x0) * (b.y1 - b.y0);
    return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
}

double layout_similarity(const std::vector<Box>& a, const std::vector<Box>& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    CostMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m.set(i, j, iou(a[i], b[j]));
    return numkit::hungarian_max(m).total / static_cast<double>(std::max(a.size(), b.size()));
}

double sdi(const BoxGroups& groups) {
    check_sdi_input(groups);
    return mean_over_groups(groups, [](const std::vector<BoxSet>& g) { return sdi_group_term(g); },
                            true);
}

double sdi_serial(const BoxGroups& groups) {
    check_sdi_input(groups);
    return mean_over_groups(groups, [](const std::vector<BoxSet>& g) { return sdi_group_term(g); },
                            false);
}

double pvs(const TonalGroups& groups) {
    check_pvs_input(groups);
    return mean_over_groups(
        groups, [](const std::vector<TonalTriple>& g) { return pvs_group_term(g); }, true);
}

double pvs_serial(const TonalGroups& groups) {
    check_pvs_input(groups);
    return mean_over_groups(
        groups, [](const std::vector<TonalTriple>& g) { return pvs_group_term(g); }, false);
}

double population_std(const std::vector<double>& xs) {
    if (xs.empty()) raise(ErrorKind::EmptySet, "population_std: no values");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return std::sqrt(std::max(var, 0.0));
}

} // namespace divlab::bench
