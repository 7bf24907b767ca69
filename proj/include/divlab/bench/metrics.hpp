#pragma once

#include <map>
#include <string>
#include <vector>

#include "divlab/bench/image.hpp"
#include "divlab/numkit/vec.hpp"

namespace divlab::bench {

struct FeatureRecord {
    std::string image_id;
    std::string prompt_id;
    numkit::RealVector vector;
};

// Mean pairwise cosine similarity over all unordered pairs; lower means more
// identity diversity. Duplicate vectors are NOT collapsed: repeats are the
// collapse signal this metric exists to expose.
double ids(const std::vector<FeatureRecord>& feats);
double ids_serial(const std::vector<FeatureRecord>& feats);

// Index of the closest train vector per query, cosine distance, ties broken
// toward the lowest train index.
std::vector<int> nearest_train_indices(const std::vector<FeatureRecord>& train,
                                       const std::vector<FeatureRecord>& queries);
std::vector<int> nearest_train_indices_serial(const std::vector<FeatureRecord>& train,
                                              const std::vector<FeatureRecord>& queries);

struct AscBreakdown {
    int n_train = 0;
    int learned_test = 0;
    int learned_synth = 0;
    int s_star_test = 0;
    int s_star_synth = 0;
    double irs_test = 0.0;
    double irs_synth = 0.0;
    double value = 0.0;
};

AscBreakdown asc_breakdown(const std::vector<FeatureRecord>& train,
                           const std::vector<FeatureRecord>& test,
                           const std::vector<FeatureRecord>& synth);
double asc(const std::vector<FeatureRecord>& train,
           const std::vector<FeatureRecord>& test,
           const std::vector<FeatureRecord>& synth);
double asc_serial(const std::vector<FeatureRecord>& train,
                  const std::vector<FeatureRecord>& test,
                  const std::vector<FeatureRecord>& synth);

struct Box {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
};

// Finite coordinates with positive extent, else DomainError.
void check_box(const Box& b);

double iou(const Box& a, const Box& b);

struct BoxSet {
    std::string image_id;
    std::string prompt_id;
    std::vector<Box> boxes;
};

// Hungarian-matched IoU total over max(|a|, |b|). Conventions for empty sets:
// exactly one empty -> 0, both empty -> 1.
double layout_similarity(const std::vector<Box>& a, const std::vector<Box>& b);

using BoxGroups = std::map<std::string, std::vector<BoxSet>>;

double sdi(const BoxGroups& groups);
double sdi_serial(const BoxGroups& groups);

using TonalGroups = std::map<std::string, std::vector<TonalTriple>>;

double pvs(const TonalGroups& groups);
double pvs_serial(const TonalGroups& groups);

double population_std(const std::vector<double>& xs);

} // namespace divlab::bench
