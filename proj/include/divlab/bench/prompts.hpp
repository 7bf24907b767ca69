#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace divlab::bench {

enum class Dimension { Id, Style, Layout, Tonal };

const char* dimension_name(Dimension d);          // "ID", "Style", "Layout", "Tonal"
std::string dimension_slug(Dimension d);          // "id", "style", "layout", "tonal"
Dimension parse_dimension(const std::string& s);  // case-insensitive, else UnknownDimension

struct PromptTemplate {
    std::string id;
    // Tokens: {slot} inserts the keyword, {an:slot} prefixes a/an by leading
    // vowel letter, {plural:slot} pluralizes the keyword.
    std::string text;
};

struct SlotList {
    std::string name;
    std::vector<std::string> words;
};

struct DimensionConfig {
    std::vector<PromptTemplate> templates;
    std::vector<SlotList> slots;
    // Keyword pairs that must never co-occur in one record.
    std::vector<std::pair<std::string, std::string>> conflicts;
};

struct KeywordConfig {
    DimensionConfig id;
    DimensionConfig style;
    DimensionConfig layout;
    DimensionConfig tonal;
};

const DimensionConfig& dimension_config(const KeywordConfig& cfg, Dimension d);

// Curated stand-in lists: 3 ages x 6 ethnicities x 2 genders x 40 features
// (with a conflict list), 27 art styles, 80 object classes x 4 counts over
// 3 scene templates, 18 tonal keywords in 3 sub-dimensions.
const KeywordConfig& builtin_keyword_config();

struct PromptRecord {
    std::string id;
    std::string dimension;
    std::string template_id;
    std::vector<std::pair<std::string, std::string>> slots; // declared order
    std::string text;
    std::string group_key;
};

std::string pluralize(const std::string& noun);
std::string render_template(const PromptTemplate& tpl,
                            const std::vector<std::pair<std::string, std::string>>& slots);

// Number of conflict-free template/keyword combinations.
std::size_t feasible_count(const DimensionConfig& cfg);

// Uniform sample without replacement from the conflict-free combination
// space; deterministic per (config, target_count, seed).
std::vector<PromptRecord> gen_prompts(Dimension dim, const KeywordConfig& cfg, int target_count,
                                      std::uint64_t seed);

} // namespace divlab::bench
