#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "divlab/bench/prompts.hpp"
#include "divlab/error.hpp"

using namespace divlab;
using namespace divlab::bench;

namespace {

const SlotList& slot_named(const DimensionConfig& cfg, const std::string& name) {
    for (const auto& s : cfg.slots)
        if (s.name == name) return s;
    REQUIRE(false);
    return cfg.slots.front();
}

std::string slot_value(const PromptRecord& rec, const std::string& name) {
    for (const auto& [k, v] : rec.slots)
        if (k == name) return v;
    return {};
}

} // namespace

TEST_CASE("dimension names and parsing") {
    CHECK(std::string(dimension_name(Dimension::Id)) == "ID");
    CHECK(std::string(dimension_name(Dimension::Style)) == "Style");
    CHECK(dimension_slug(Dimension::Layout) == "layout");
    CHECK(dimension_slug(Dimension::Tonal) == "tonal");
    CHECK(parse_dimension("id") == Dimension::Id);
    CHECK(parse_dimension("ID") == Dimension::Id);
    CHECK(parse_dimension("Style") == Dimension::Style);
    CHECK(parse_dimension("LAYOUT") == Dimension::Layout);
    try {
        static_cast<void>(parse_dimension("vibes"));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownDimension);
    }
}

TEST_CASE("builtin keyword inventory") {
    const auto& cfg = builtin_keyword_config();

    CHECK(cfg.id.templates.size() == 1);
    CHECK(slot_named(cfg.id, "age").words.size() == 3);
    CHECK(slot_named(cfg.id, "ethnicity").words.size() == 6);
    CHECK(slot_named(cfg.id, "gender").words.size() == 2);
    CHECK(slot_named(cfg.id, "feature").words.size() == 40);
    CHECK(cfg.id.conflicts.size() == 7);

    CHECK(cfg.style.templates.size() == 1);
    CHECK(slot_named(cfg.style, "style").words.size() == 27);
    CHECK(slot_named(cfg.style, "subject").words.size() == 30);

    CHECK(cfg.layout.templates.size() == 3);
    CHECK(slot_named(cfg.layout, "count").words.size() == 4);
    CHECK(slot_named(cfg.layout, "object").words.size() == 80);

    CHECK(cfg.tonal.templates.size() == 1);
    CHECK(slot_named(cfg.tonal, "tone").words.size() == 18);
    CHECK(slot_named(cfg.tonal, "subject").words.size() == 45);
}

TEST_CASE("feasible counts per dimension") {
    const auto& cfg = builtin_keyword_config();
    // 3*6*2*40 = 1440 raw, minus 90 (woman x 5 facial-hair features),
    // 18 (man x lipstick) and 12 (young x receding hairline)
    CHECK(feasible_count(cfg.id) == 1320);
    CHECK(feasible_count(cfg.style) == 810);   // 27 * 30
    CHECK(feasible_count(cfg.layout) == 960);  // 3 * 4 * 80
    CHECK(feasible_count(cfg.tonal) == 810);   // 18 * 45
}

TEST_CASE("pluralize") {
    CHECK(pluralize("cat") == "cats");
    CHECK(pluralize("box") == "boxes");
    CHECK(pluralize("bus") == "buses");
    CHECK(pluralize("dish") == "dishes");
    CHECK(pluralize("bench") == "benches");
    CHECK(pluralize("puppy") == "puppies");
    CHECK(pluralize("key") == "keys"); // vowel + y keeps the y
    CHECK(pluralize("person") == "people");
    CHECK(pluralize("computer mouse") == "computer mice");
    CHECK(pluralize("sheep") == "sheep");
    CHECK(pluralize("scissors") == "scissors");
    CHECK(pluralize("skis") == "skis");
    CHECK(pluralize("knife") == "knives");
    CHECK(pluralize("broccoli") == "broccoli");
}

TEST_CASE("template rendering") {
    PromptTemplate tpl{"t", "A photo of {an:adj} {noun} and {count} {plural:noun}."};
    auto text = render_template(tpl, {{"adj", "old"}, {"noun", "clock"}, {"count", "two"}});
    CHECK(text == "A photo of an old clock and two clocks.");

    auto text2 = render_template(tpl, {{"adj", "red"}, {"noun", "bench"}, {"count", "three"}});
    CHECK(text2 == "A photo of a red bench and three benches.");

    PromptTemplate missing{"t", "A {thing}."};
    CHECK_THROWS_AS(static_cast<void>(render_template(missing, {{"other", "x"}})), Error);
    PromptTemplate bad_mod{"t", "A {upper:thing}."};
    CHECK_THROWS_AS(static_cast<void>(render_template(bad_mod, {{"thing", "x"}})), Error);
}

TEST_CASE("generation is deterministic and duplicate-free") {
    const auto& cfg = builtin_keyword_config();
    auto a = gen_prompts(Dimension::Id, cfg, 800, 42);
    auto b = gen_prompts(Dimension::Id, cfg, 800, 42);
    REQUIRE(a.size() == 800);
    REQUIRE(b.size() == 800);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].text == b[i].text);
        CHECK(a[i].slots == b[i].slots);
    }

    std::set<std::string> ids;
    std::set<std::string> combos;
    for (const auto& r : a) {
        ids.insert(r.id);
        std::string key = r.template_id;
        for (const auto& [k, v] : r.slots) key += "|" + k + "=" + v;
        combos.insert(key);
    }
    CHECK(ids.size() == 800);    // record ids unique
    CHECK(combos.size() == 800); // sampling without replacement

    auto c = gen_prompts(Dimension::Id, cfg, 800, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.size(); ++i) any_diff = any_diff || c[i].text != a[i].text;
    CHECK(any_diff);
}

TEST_CASE("generated id prompts respect the conflict list") {
    const auto& cfg = builtin_keyword_config();
    auto recs = gen_prompts(Dimension::Id, cfg, 800, 7);
    for (const auto& rec : recs) {
        std::set<std::string> words;
        for (const auto& [k, v] : rec.slots) words.insert(v);
        for (const auto& [a, b] : cfg.id.conflicts) {
            bool both = words.count(a) > 0 && words.count(b) > 0;
            CHECK_FALSE(both);
        }
    }
}

TEST_CASE("record shape and group keys per dimension") {
    const auto& cfg = builtin_keyword_config();

    auto id_recs = gen_prompts(Dimension::Id, cfg, 10, 1);
    for (const auto& r : id_recs) {
        CHECK(r.dimension == "ID");
        CHECK(r.group_key == "id"); // one pooled group per dimension
        CHECK(r.id.rfind("id-", 0) == 0);
        CHECK(r.text.find('{') == std::string::npos);
    }

    auto style_recs = gen_prompts(Dimension::Style, cfg, 10, 1);
    for (const auto& r : style_recs) CHECK(r.group_key == "style");

    // layout and tonal group same-prompt images: the key is the record id
    auto layout_recs = gen_prompts(Dimension::Layout, cfg, 10, 1);
    for (const auto& r : layout_recs) {
        CHECK(r.group_key == r.id);
        CHECK(r.dimension == "Layout");
    }
    auto tonal_recs = gen_prompts(Dimension::Tonal, cfg, 10, 1);
    for (const auto& r : tonal_recs) CHECK(r.group_key == r.id);
}

TEST_CASE("layout prompts read naturally") {
    const auto& cfg = builtin_keyword_config();
    auto recs = gen_prompts(Dimension::Layout, cfg, 960, 3); // the whole space
    std::set<std::string> templates;
    for (const auto& r : recs) {
        templates.insert(r.template_id);
        // count words always pair with a pluralized object
        auto count = slot_value(r, "count");
        CHECK((count == "two" || count == "three" || count == "four" || count == "five"));
        CHECK(r.text.find(count + " ") != std::string::npos);
    }
    CHECK(templates.size() == 3);
}

TEST_CASE("infeasible request counts both sides") {
    DimensionConfig tiny;
    tiny.templates = {{"t0", "A {a} and {b}."}};
    tiny.slots = {{"a", {"x", "y"}}, {"b", {"u", "v"}}};
    KeywordConfig cfg = builtin_keyword_config();
    cfg.layout = tiny; // 1 * 2 * 2 = 4 feasible
    CHECK(feasible_count(tiny) == 4);
    CHECK(gen_prompts(Dimension::Layout, cfg, 4, 1).size() == 4);
    try {
        static_cast<void>(gen_prompts(Dimension::Layout, cfg, 10, 1));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleCount);
        CHECK(std::string(e.what()).find("4") != std::string::npos);
        CHECK(std::string(e.what()).find("10") != std::string::npos);
    }
    CHECK_THROWS_AS(static_cast<void>(gen_prompts(Dimension::Layout, cfg, 0, 1)), Error);
}

TEST_CASE("exhaustive draw covers the whole space uniformly") {
    const auto& cfg = builtin_keyword_config();
    auto recs = gen_prompts(Dimension::Tonal, cfg, 810, 99);
    std::set<std::string> texts;
    for (const auto& r : recs) texts.insert(r.text);
    CHECK(texts.size() == 810); // a full draw is a permutation of the space
}
