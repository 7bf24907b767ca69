#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divlab/bench/metrics.hpp"
#include "divlab/bench/prompts.hpp"

namespace divlab::bench {

// JSON-lines readers. Any malformed line or schema violation raises DataError
// naming the file and 1-based line number.
std::vector<FeatureRecord> read_features_jsonl(const std::string& path);
std::vector<BoxSet> read_box_sets_jsonl(const std::string& path);
std::vector<PromptRecord> read_prompts_jsonl(const std::string& path);

void write_prompts_jsonl(const std::string& path, const std::vector<PromptRecord>& recs);

BoxGroups group_boxes_by_prompt(const std::vector<BoxSet>& sets);

struct ManifestEntry {
    std::string image_id;
    std::string path; // relative paths resolve against the manifest directory
    std::string group_key;
};

std::vector<ManifestEntry> read_manifest_jsonl(const std::string& path);

// Decodes every referenced PPM and reduces it to a tonal triple, grouped by
// group_key. Decoding fans out across images; failures surface as DataError
// naming the image.
TonalGroups tonal_groups_from_manifest(const std::string& manifest_path,
                                       bool serial_reference = false);

struct ReportRow {
    std::string metric;
    std::string dimension;
    int group_count = 0;
    double value = 0.0;
};

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::string& path);
void write_report_json(const std::string& path, const std::vector<ReportRow>& rows,
                       const std::string& fingerprint, std::uint64_t seed);

} // namespace divlab::bench
