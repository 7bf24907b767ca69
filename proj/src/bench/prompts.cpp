#include "divlab/bench/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "divlab/error.hpp"
#include "divlab/numkit/rng.hpp"

namespace divlab::bench {

const char* dimension_name(Dimension d) {
    switch (d) {
    case Dimension::Id: return "ID";
    case Dimension::Style: return "Style";
    case Dimension::Layout: return "Layout";
    case Dimension::Tonal: return "Tonal";
    }
    return "?";
}

std::string dimension_slug(Dimension d) {
    std::string s = dimension_name(d);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Dimension parse_dimension(const std::string& s) {
    std::string low = s;
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "id") return Dimension::Id;
    if (low == "style") return Dimension::Style;
    if (low == "layout") return Dimension::Layout;
    if (low == "tonal") return Dimension::Tonal;
    raise(ErrorKind::UnknownDimension, "no dimension named '" + s + "'");
}

const DimensionConfig& dimension_config(const KeywordConfig& cfg, Dimension d) {
    switch (d) {
    case Dimension::Id: return cfg.id;
    case Dimension::Style: return cfg.style;
    case Dimension::Layout: return cfg.layout;
    case Dimension::Tonal: return cfg.tonal;
    }
    raise(ErrorKind::UnknownDimension, "bad dimension enum value");
}

namespace {

DimensionConfig make_id_config() {
    DimensionConfig c;
    c.templates = {{"id.t0", "A high-quality portrait photo of {an:age} {ethnicity} {gender} {feature}."}};
    c.slots = {
        {"age", {"young", "middle-aged", "elderly"}},
        {"ethnicity",
         {"White", "Black", "East Asian", "South Asian", "Middle Eastern", "Hispanic"}},
        {"gender", {"man", "woman"}},
        {"feature",
         {"with a full beard",
          "with a mustache",
          "with a goatee",
          "with heavy stubble",
          "with long sideburns",
          "wearing bright lipstick",
          "with a receding hairline",
          "with wavy hair",
          "with straight hair",
          "with curly hair",
          "with black hair",
          "with blond hair",
          "with brown hair",
          "with gray hair",
          "with red hair",
          "with a bald head",
          "with a buzz cut",
          "with a ponytail",
          "with bangs",
          "with a high forehead",
          "with bushy eyebrows",
          "with arched eyebrows",
          "with narrow eyes",
          "with deep-set eyes",
          "with a prominent nose",
          "with a pointed chin",
          "with a double chin",
          "with high cheekbones",
          "with rosy cheeks",
          "with freckles",
          "with dimples",
          "with a warm smile",
          "with a serious expression",
          "wearing eyeglasses",
          "wearing sunglasses",
          "wearing a hat",
          "wearing earrings",
          "wearing a necklace",
          "wearing a scarf",
          "with an oval face"}},
    };
    c.conflicts = {
        {"woman", "with a full beard"},
        {"woman", "with a mustache"},
        {"woman", "with a goatee"},
        {"woman", "with heavy stubble"},
        {"woman", "with long sideburns"},
        {"man", "wearing bright lipstick"},
        {"young", "with a receding hairline"},
    };
    return c;
}

DimensionConfig make_style_config() {
    DimensionConfig c;
    c.templates = {{"style.t0", "A painting of {subject} in the {style} style."}};
    c.slots = {
        {"style",
         {"Impressionist",  "Cubist",         "Surrealist",    "Baroque",
          "Rococo",         "Renaissance",    "Romantic",      "Realist",
          "Expressionist",  "Fauvist",        "Pointillist",   "Art Nouveau",
          "Art Deco",       "Minimalist",     "Abstract Expressionist",
          "Pop Art",        "Ukiyo-e",        "Gothic",        "Neoclassical",
          "Symbolist",      "Futurist",       "Constructivist", "Suprematist",
          "Pre-Raphaelite", "Byzantine",      "Folk Art",      "Tonalist"}},
        {"subject",
         {"a lighthouse on a rocky coast",
          "an old fishing boat",
          "a bowl of ripe fruit",
          "a quiet village square",
          "a dancer in mid-motion",
          "a pair of worn leather boots",
          "a windmill at dawn",
          "a city bridge in the rain",
          "a vase of sunflowers",
          "a sleeping cat",
          "a mountain lake at sunset",
          "a crowded market street",
          "a grand piano in an empty hall",
          "a field of lavender",
          "a steam locomotive",
          "a chess game in progress",
          "an open book on a desk",
          "a garden gate overgrown with ivy",
          "a violinist on stage",
          "a row of beach huts",
          "a snowy forest path",
          "a hot air balloon over hills",
          "a cafe terrace at night",
          "an abandoned farmhouse",
          "a flock of starlings",
          "a ship in a storm",
          "a winding river valley",
          "a stone castle on a cliff",
          "a street musician with an accordion",
          "a bouquet of wild roses"}},
    };
    return c;
}

DimensionConfig make_layout_config() {
    DimensionConfig c;
    c.templates = {
        {"layout.t0", "A photo of {count} {plural:object} arranged on a plain surface."},
        {"layout.t1", "An overhead shot of {count} {plural:object} scattered across a wooden floor."},
        {"layout.t2", "A wide-angle photo of {count} {plural:object} lined up against a white wall."},
    };
    c.slots = {
        {"count", {"two", "three", "four", "five"}},
        {"object",
         {"person",        "bicycle",      "car",           "motorcycle",   "airplane",
          "bus",           "train",        "truck",         "boat",         "traffic light",
          "fire hydrant",  "stop sign",    "parking meter", "bench",        "bird",
          "cat",           "dog",          "horse",         "sheep",        "cow",
          "elephant",      "bear",         "zebra",         "giraffe",      "backpack",
          "umbrella",      "handbag",      "tie",           "suitcase",     "frisbee",
          "skis",          "snowboard",    "sports ball",   "kite",         "baseball bat",
          "baseball glove", "skateboard",  "surfboard",     "tennis racket", "bottle",
          "wine glass",    "cup",          "fork",          "knife",        "spoon",
          "bowl",          "banana",       "apple",         "sandwich",     "orange",
          "broccoli",      "carrot",       "hot dog",       "pizza",        "donut",
          "cake",          "chair",        "couch",         "potted plant", "bed",
          "dining table",  "toilet",       "tv",            "laptop",       "computer mouse",
          "remote",        "keyboard",     "cell phone",    "microwave",    "oven",
          "toaster",       "sink",         "refrigerator",  "book",         "clock",
          "vase",          "scissors",     "teddy bear",    "hair drier",   "toothbrush"}},
    };
    return c;
}

DimensionConfig make_tonal_config() {
    DimensionConfig c;
    c.templates = {{"tonal.t0", "A photograph of {subject}, {tone}."}};
    c.slots = {
        {"tone",
         {"with highly saturated colors",
          "with vivid colors",
          "with muted colors",
          "with desaturated colors",
          "in monochrome",
          "with pastel tones",
          "brightly lit",
          "in dim lighting",
          "in low-key lighting",
          "in high-key lighting",
          "at golden hour",
          "in deep shadow",
          "with high contrast",
          "with low contrast",
          "with soft contrast",
          "with harsh contrast",
          "with dramatic contrast",
          "with flat contrast"}},
        {"subject",
         {"a city street at dusk",
          "a forest clearing",
          "a seaside promenade",
          "a mountain ridge",
          "a quiet library",
          "an open-air market",
          "a train station platform",
          "a desert dune",
          "a rooftop garden",
          "a harbor at dawn",
          "a cobblestone alley",
          "a wheat field",
          "a frozen lake",
          "a botanical greenhouse",
          "a lighthouse at the shore",
          "a narrow canal",
          "a vineyard on a hillside",
          "an old stone bridge",
          "a windswept moor",
          "a neon-lit arcade",
          "a sunlit courtyard",
          "a foggy pier",
          "a terraced rice paddy",
          "a cliffside village",
          "a midnight diner",
          "a carousel in a park",
          "an abandoned warehouse",
          "a ski slope",
          "a riverside campsite",
          "a flower market",
          "a subway car",
          "a grand staircase",
          "a castle courtyard",
          "a tide pool",
          "a birch grove",
          "a rain-soaked crosswalk",
          "a paper lantern festival",
          "a windmill field",
          "a coastal cliff path",
          "a snow-covered plaza",
          "a cactus garden",
          "a ferris wheel at night",
          "a marble fountain",
          "an orchard in bloom",
          "a busy fish market"}},
    };
    return c;
}

bool starts_with_vowel(const std::string& w) {
    if (w.empty()) return false;
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(w.front())));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool ends_with(const std::string& s, const char* suffix) {
    const std::string suf(suffix);
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

const std::string* slot_value(const std::vector<std::pair<std::string, std::string>>& slots,
                              const std::string& name) {
    for (const auto& [n, w] : slots)
        if (n == name) return &w;
    return nullptr;
}

std::string format_id(const std::string& slug, int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%04d", slug.c_str(), i);
    return buf;
}

} // namespace

const KeywordConfig& builtin_keyword_config() {
    static const KeywordConfig cfg{make_id_config(), make_style_config(), make_layout_config(),
                                   make_tonal_config()};
    return cfg;
}

std::string pluralize(const std::string& noun) {
    static const std::vector<std::pair<std::string, std::string>> irregular = {
        {"person", "people"},     {"computer mouse", "computer mice"},
        {"sheep", "sheep"},       {"scissors", "scissors"},
        {"skis", "skis"},         {"knife", "knives"},
        {"broccoli", "broccoli"},
    };
    for (const auto& [sing, plur] : irregular)
        if (noun == sing) return plur;
    if (ends_with(noun, "s") || ends_with(noun, "x") || ends_with(noun, "z") ||
        ends_with(noun, "ch") || ends_with(noun, "sh"))
        return noun + "es";
    if (noun.size() >= 2 && ends_with(noun, "y") && !starts_with_vowel(noun.substr(noun.size() - 2, 1)))
        return noun.substr(0, noun.size() - 1) + "ies";
    return noun + "s";
}

std::string render_template(const PromptTemplate& tpl,
                            const std::vector<std::pair<std::string, std::string>>& slots) {
    std::string out;
    out.reserve(tpl.text.size() + 32);
    for (std::size_t i = 0; i < tpl.text.size();) {
        if (tpl.text[i] != '{') {
            out += tpl.text[i++];
            continue;
        }
        const std::size_t close = tpl.text.find('}', i);
        if (close == std::string::npos)
            raise(ErrorKind::ConfigError, "template '" + tpl.id + "': unclosed '{'");
        std::string token = tpl.text.substr(i + 1, close - i - 1);
        std::string mod;
        const std::size_t colon = token.find(':');
        if (colon != std::string::npos) {
            mod = token.substr(0, colon);
            token = token.substr(colon + 1);
        }
        const std::string* word = slot_value(slots, token);
        if (word == nullptr)
            raise(ErrorKind::ConfigError,
                  "template '" + tpl.id + "' references unknown slot '" + token + "'");
        if (mod.empty()) {
            out += *word;
        } else if (mod == "an") {
            out += starts_with_vowel(*word) ? "an " : "a ";
            out += *word;
        } else if (mod == "plural") {
            out += pluralize(*word);
        } else {
            raise(ErrorKind::ConfigError, "template '" + tpl.id + "': unknown modifier '" + mod + "'");
        }
        i = close + 1;
    }
    return out;
}

namespace {

void check_dimension_config(const DimensionConfig& dc) {
    if (dc.templates.empty()) raise(ErrorKind::ConfigError, "no templates declared");
    if (dc.slots.empty()) raise(ErrorKind::ConfigError, "no slots declared");
    for (const SlotList& s : dc.slots)
        if (s.words.empty())
            raise(ErrorKind::ConfigError, "slot '" + s.name + "' has no keywords");
}

std::size_t combos_per_template(const DimensionConfig& dc) {
    std::size_t n = 1;
    for (const SlotList& s : dc.slots) n *= s.words.size();
    return n;
}

// Combination index -> (template index, word index per slot). The last slot
// varies fastest.
void decode_combo(const DimensionConfig& dc, std::size_t idx, std::size_t combos,
                  std::size_t& tpl, std::vector<std::size_t>& words) {
    tpl = idx / combos;
    std::size_t rem = idx % combos;
    words.resize(dc.slots.size());
    for (std::size_t s = dc.slots.size(); s-- > 0;) {
        const std::size_t size = dc.slots[s].words.size();
        words[s] = rem % size;
        rem /= size;
    }
}

bool has_conflict(const DimensionConfig& dc, const std::vector<std::size_t>& words) {
    auto contains = [&](const std::string& kw) {
        for (std::size_t s = 0; s < dc.slots.size(); ++s)
            if (dc.slots[s].words[words[s]] == kw) return true;
        return false;
    };
    for (const auto& [a, b] : dc.conflicts)
        if (contains(a) && contains(b)) return true;
    return false;
}

} // namespace

std::size_t feasible_count(const DimensionConfig& dc) {
    check_dimension_config(dc);
    const std::size_t combos = combos_per_template(dc);
    const std::size_t total = dc.templates.size() * combos;
    std::size_t tpl = 0;
    std::vector<std::size_t> words;
    std::size_t feasible = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        decode_combo(dc, idx, combos, tpl, words);
        if (!has_conflict(dc, words)) ++feasible;
    }
    return feasible;
}

std::vector<PromptRecord> gen_prompts(Dimension dim, const KeywordConfig& cfg, int target_count,
                                      std::uint64_t seed) {
    const DimensionConfig& dc = dimension_config(cfg, dim);
    check_dimension_config(dc);
    if (target_count < 1)
        raise(ErrorKind::ConfigError, "target count must be >= 1, got " +
                                          std::to_string(target_count));

    const std::size_t combos = combos_per_template(dc);
    const std::size_t total = dc.templates.size() * combos;
    std::vector<std::size_t> feasible;
    feasible.reserve(total);
    {
        std::size_t tpl = 0;
        std::vector<std::size_t> words;
        for (std::size_t idx = 0; idx < total; ++idx) {
            decode_combo(dc, idx, combos, tpl, words);
            if (!has_conflict(dc, words)) feasible.push_back(idx);
        }
    }
    if (static_cast<std::size_t>(target_count) > feasible.size())
        raise(ErrorKind::InfeasibleCount,
              std::string(dimension_name(dim)) + ": requested " + std::to_string(target_count) +
                  " prompts but only " + std::to_string(feasible.size()) +
                  " conflict-free combinations exist");

    // Partial Fisher-Yates: the first target_count entries become a uniform
    // sample without replacement.
    numkit::RandomStream stream(seed);
    for (int i = 0; i < target_count; ++i) {
        const std::size_t left = feasible.size() - static_cast<std::size_t>(i);
        const std::size_t j = static_cast<std::size_t>(i) + stream.next_below(left);
        std::swap(feasible[static_cast<std::size_t>(i)], feasible[j]);
    }

    const std::string slug = dimension_slug(dim);
    std::vector<PromptRecord> out;
    out.reserve(static_cast<std::size_t>(target_count));
    std::size_t tpl = 0;
    std::vector<std::size_t> words;
    for (int i = 0; i < target_count; ++i) {
        decode_combo(dc, feasible[static_cast<std::size_t>(i)], combos, tpl, words);
        PromptRecord rec;
        rec.id = format_id(slug, i);
        rec.dimension = dimension_name(dim);
        rec.template_id = dc.templates[tpl].id;
        for (std::size_t s = 0; s < dc.slots.size(); ++s)
            rec.slots.emplace_back(dc.slots[s].name, dc.slots[s].words[words[s]]);
        rec.text = render_template(dc.templates[tpl], rec.slots);
        // IDS/ASC pool a whole dimension; SDI/PVS score the images of one
        // prompt as a group.
        rec.group_key = (dim == Dimension::Id || dim == Dimension::Style) ? slug : rec.id;
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace divlab::bench
