#include "divlab/bench/jsonl.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "divlab/error.hpp"
#include "divlab/io_util.hpp"

namespace divlab::bench {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad_line(const std::string& path, std::size_t line_no, const std::string& why) {
    raise(ErrorKind::DataError, path + ":" + std::to_string(line_no) + ": " + why);
}

// Calls fn(line_no, parsed_object) for every non-empty line.
template <typename Fn>
void for_each_json_line(const std::string& path, Fn fn) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) bad_line(path, line_no, "malformed JSON");
        if (!obj.is_object()) bad_line(path, line_no, "expected a JSON object");
        fn(line_no, obj);
    }
}

std::string get_string(const json& obj, const char* key, const std::string& path,
                       std::size_t line_no) {
    if (!obj.contains(key) || !obj[key].is_string())
        bad_line(path, line_no, "missing string field '" + std::string(key) + "'");
    return obj[key].get<std::string>();
}

double get_finite_number(const json& v, const char* what, const std::string& path,
                         std::size_t line_no) {
    if (!v.is_number()) bad_line(path, line_no, std::string(what) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad_line(path, line_no, std::string(what) + " is not finite");
    return x;
}

} // namespace

std::vector<FeatureRecord> read_features_jsonl(const std::string& path) {
    std::vector<FeatureRecord> out;
    std::size_t dim = 0;
    for_each_json_line(path, [&](std::size_t line_no, const json& obj) {
        FeatureRecord rec;
        rec.image_id = get_string(obj, "image_id", path, line_no);
        rec.prompt_id = get_string(obj, "prompt_id", path, line_no);
        if (!obj.contains("vector") || !obj["vector"].is_array())
            bad_line(path, line_no, "missing array field 'vector'");
        for (const auto& v : obj["vector"])
            rec.vector.push_back(get_finite_number(v, "vector entry", path, line_no));
        if (rec.vector.empty()) bad_line(path, line_no, "'vector' is empty");
        if (dim == 0)
            dim = rec.vector.size();
        else if (rec.vector.size() != dim)
            bad_line(path, line_no, "vector length " + std::to_string(rec.vector.size()) +
                                        " differs from earlier length " + std::to_string(dim));
        out.push_back(std::move(rec));
    });
    return out;
}

std::vector<BoxSet> read_box_sets_jsonl(const std::string& path) {
    std::vector<BoxSet> out;
    for_each_json_line(path, [&](std::size_t line_no, const json& obj) {
        BoxSet set;
        set.image_id = get_string(obj, "image_id", path, line_no);
        set.prompt_id = get_string(obj, "prompt_id", path, line_no);
        if (!obj.contains("boxes") || !obj["boxes"].is_array())
            bad_line(path, line_no, "missing array field 'boxes'");
        for (const auto& b : obj["boxes"]) {
            if (!b.is_array() || b.size() != 4)
                bad_line(path, line_no, "each box must be an array of 4 numbers");
            Box box;
            box.x0 = get_finite_number(b[0], "box x0", path, line_no);
            box.y0 = get_finite_number(b[1], "box y0", path, line_no);
            box.x1 = get_finite_number(b[2], "box x1", path, line_no);
            box.y1 = get_finite_number(b[3], "box y1", path, line_no);
            try {
                check_box(box);
            } catch (const Error& e) {
                bad_line(path, line_no, e.what());
            }
            set.boxes.push_back(box);
        }
        out.push_back(std::move(set));
    });
    return out;
}

std::vector<PromptRecord> read_prompts_jsonl(const std::string& path) {
    std::vector<PromptRecord> out;
    for_each_json_line(path, [&](std::size_t line_no, const json& obj) {
        PromptRecord rec;
        rec.id = get_string(obj, "id", path, line_no);
        rec.dimension = get_string(obj, "dimension", path, line_no);
        rec.template_id = get_string(obj, "template_id", path, line_no);
        if (!obj.contains("slots") || !obj["slots"].is_object())
            bad_line(path, line_no, "missing object field 'slots'");
        for (const auto& [name, v] : obj["slots"].items()) {
            if (!v.is_string()) bad_line(path, line_no, "slot '" + name + "' must be a string");
            rec.slots.emplace_back(name, v.get<std::string>());
        }
        rec.text = get_string(obj, "text", path, line_no);
        rec.group_key = get_string(obj, "group_key", path, line_no);
        out.push_back(std::move(rec));
    });
    return out;
}

void write_prompts_jsonl(const std::string& path, const std::vector<PromptRecord>& recs) {
    std::string out;
    for (const PromptRecord& rec : recs) {
        json obj;
        obj["id"] = rec.id;
        obj["dimension"] = rec.dimension;
        obj["template_id"] = rec.template_id;
        json slots = json::object();
        for (const auto& [name, word] : rec.slots) slots[name] = word;
        obj["slots"] = std::move(slots);
        obj["text"] = rec.text;
        obj["group_key"] = rec.group_key;
        out += obj.dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

BoxGroups group_boxes_by_prompt(const std::vector<BoxSet>& sets) {
    BoxGroups groups;
    for (const BoxSet& s : sets) groups[s.prompt_id].push_back(s);
    return groups;
}

std::vector<ManifestEntry> read_manifest_jsonl(const std::string& path) {
    std::vector<ManifestEntry> out;
    for_each_json_line(path, [&](std::size_t line_no, const json& obj) {
        ManifestEntry e;
        e.image_id = get_string(obj, "image_id", path, line_no);
        e.path = get_string(obj, "path", path, line_no);
        e.group_key = get_string(obj, "group_key", path, line_no);
        out.push_back(std::move(e));
    });
    return out;
}

TonalGroups tonal_groups_from_manifest(const std::string& manifest_path, bool serial_reference) {
    const std::vector<ManifestEntry> entries = read_manifest_jsonl(manifest_path);
    if (entries.empty()) raise(ErrorKind::EmptySet, manifest_path + ": no manifest entries");
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::vector<TonalTriple> triples(entries.size());
    std::vector<std::string> errors(entries.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(entries.size());
    // Exceptions cannot cross the parallel region; each slot records its own
    // failure and the first one (by manifest order) is rethrown after.
#pragma omp parallel for schedule(dynamic) if (!serial_reference)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const ManifestEntry& e = entries[static_cast<std::size_t>(i)];
        try {
            std::filesystem::path p(e.path);
            if (p.is_relative()) p = base / p;
            const std::vector<std::uint8_t> bytes = read_file_bytes(p.string());
            triples[static_cast<std::size_t>(i)] =
                tonal_stats(decode_ppm(std::span<const std::uint8_t>(bytes)));
        } catch (const std::exception& ex) {
            errors[static_cast<std::size_t>(i)] =
                "image '" + e.image_id + "' (" + e.path + "): " + ex.what();
        }
    }
    for (const std::string& err : errors)
        if (!err.empty()) raise(ErrorKind::DataError, err);

    TonalGroups groups;
    for (std::size_t i = 0; i < entries.size(); ++i)
        groups[entries[i].group_key].push_back(triples[i]);
    return groups;
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::string out = "metric,dimension,group_count,value\n";
    for (const ReportRow& r : rows) {
        out += r.metric;
        out += ',';
        out += r.dimension;
        out += ',';
        out += std::to_string(r.group_count);
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "metric,dimension,group_count,value")
                bad_line(path, line_no, "unexpected report header '" + line + "'");
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 4) bad_line(path, line_no, "expected 4 comma-separated fields");
        ReportRow r;
        r.metric = fields[0];
        r.dimension = fields[1];
        try {
            r.group_count = std::stoi(fields[2]);
            r.value = std::stod(fields[3]);
        } catch (const std::exception&) {
            bad_line(path, line_no, "non-numeric group_count or value");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_report_json(const std::string& path, const std::vector<ReportRow>& rows,
                       const std::string& fingerprint, std::uint64_t seed) {
    json doc;
    doc["fingerprint"] = fingerprint;
    doc["seed"] = seed;
    json metrics = json::array();
    for (const ReportRow& r : rows) {
        json m;
        m["metric"] = r.metric;
        m["dimension"] = r.dimension;
        m["group_count"] = r.group_count;
        m["value"] = r.value;
        metrics.push_back(std::move(m));
    }
    doc["metrics"] = std::move(metrics);
    write_file_atomic(path, doc.dump(2) + "\n");
}

} // namespace divlab::bench
