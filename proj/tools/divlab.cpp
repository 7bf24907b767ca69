#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "divlab/align/align.hpp"
#include "divlab/bench/jsonl.hpp"
#include "divlab/bench/metrics.hpp"
#include "divlab/bench/prompts.hpp"
#include "divlab/error.hpp"
#include "divlab/flowgen/flow.hpp"
#include "divlab/flowgen/params_io.hpp"
#include "divlab/io_util.hpp"
#include "divlab/numkit/rng.hpp"
#include "divlab/reward/reward_io.hpp"

namespace {

using namespace divlab;

// Substream tag for building the reward spec; stages 1-3 are claimed inside
// the alignment module.
constexpr std::uint64_t kRewardStream = 4;

enum class OptKind { Str, Int, U64, Real, Flag };

struct OptSpec {
    const char* name;
    OptKind kind;
    const char* def; // nullptr = required (Flag always defaults to off)
    const char* help;
};

// Flags every command accepts.
const std::vector<OptSpec> kGlobalSpecs = {
    {"seed", OptKind::U64, "42", "random seed"},
    {"config", OptKind::Str, "", "flat key=value config file, overridden by flags"},
    {"out", OptKind::Str, nullptr, "output directory"},
    {"quiet", OptKind::Flag, "", "suppress progress output"},
};

struct Options {
    std::string command;
    std::vector<OptSpec> specs;
    std::map<std::string, std::string> values;

    const OptSpec* find(const std::string& name) const {
        for (const OptSpec& s : specs)
            if (name == s.name) return &s;
        return nullptr;
    }

    const std::string& str(const std::string& name) const {
        auto it = values.find(name);
        if (it == values.end())
            raise(ErrorKind::ConfigError, "internal: option --" + name + " not declared");
        return it->second;
    }

    long long integer(const std::string& name) const {
        const std::string& s = str(name);
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0' || errno == ERANGE)
            raise(ErrorKind::ConfigError, "--" + name + " expects an integer, got '" + s + "'");
        return v;
    }

    std::uint64_t u64(const std::string& name) const {
        const std::string& s = str(name);
        errno = 0;
        char* end = nullptr;
        unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0' || errno == ERANGE)
            raise(ErrorKind::ConfigError,
                  "--" + name + " expects an unsigned integer, got '" + s + "'");
        return v;
    }

    double real(const std::string& name) const {
        const std::string& s = str(name);
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || errno == ERANGE)
            raise(ErrorKind::ConfigError, "--" + name + " expects a number, got '" + s + "'");
        return v;
    }

    bool flag(const std::string& name) const { return str(name) == "1"; }
    bool quiet() const { return flag("quiet"); }
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

void apply_config_file(Options& opts, const std::set<std::string>& from_flags) {
    const std::string path = opts.values["config"];
    if (path.empty()) return;
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            raise(ErrorKind::ConfigError,
                  path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const OptSpec* spec = opts.find(key);
        if (spec == nullptr || key == "config")
            raise(ErrorKind::ConfigError,
                  path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (from_flags.count(key)) continue; // flags win
        opts.values[key] = spec->kind == OptKind::Flag ? (value == "1" || value == "true" ? "1" : "0")
                                                       : value;
    }
}

void print_command_help(const Options& opts) {
    std::printf("usage: divlab %s [--flags]\n\n", opts.command.c_str());
    for (const OptSpec& s : opts.specs) {
        std::string lhs = "--" + std::string(s.name);
        if (s.kind != OptKind::Flag) lhs += " <v>";
        if (s.def == nullptr)
            std::printf("  %-26s %s (required)\n", lhs.c_str(), s.help);
        else if (s.kind == OptKind::Flag || std::string(s.def).empty())
            std::printf("  %-26s %s\n", lhs.c_str(), s.help);
        else
            std::printf("  %-26s %s (default %s)\n", lhs.c_str(), s.help, s.def);
    }
}

// Parses argv into resolved options (flags > config file > defaults).
// Returns false when --help was consumed.
bool parse_options(Options& opts, int argc, char** argv, int first) {
    std::set<std::string> from_flags;
    for (int i = first; i < argc; ++i) {
        std::string tok = argv[i];
        if (tok == "--help" || tok == "-h") {
            print_command_help(opts);
            return false;
        }
        if (tok.rfind("--", 0) != 0)
            raise(ErrorKind::ConfigError, "unexpected argument '" + tok + "'");
        tok = tok.substr(2);
        std::string value;
        bool has_value = false;
        const std::size_t eq = tok.find('=');
        if (eq != std::string::npos) {
            value = tok.substr(eq + 1);
            tok = tok.substr(0, eq);
            has_value = true;
        }
        const OptSpec* spec = opts.find(tok);
        if (spec == nullptr) raise(ErrorKind::ConfigError, "unknown flag --" + tok);
        if (spec->kind == OptKind::Flag) {
            if (has_value)
                raise(ErrorKind::ConfigError, "flag --" + tok + " does not take a value");
            value = "1";
        } else if (!has_value) {
            if (i + 1 >= argc) raise(ErrorKind::ConfigError, "flag --" + tok + " needs a value");
            value = argv[++i];
        }
        opts.values[tok] = value;
        from_flags.insert(tok);
    }
    // defaults for flags not given, so the config pass can see 'config' itself
    for (const OptSpec& s : opts.specs)
        if (!opts.values.count(s.name) && (s.def != nullptr || s.kind == OptKind::Flag))
            opts.values[s.name] = s.kind == OptKind::Flag ? (s.def && *s.def ? s.def : "0")
                                                          : s.def;
    apply_config_file(opts, from_flags);
    for (const OptSpec& s : opts.specs)
        if (!opts.values.count(s.name))
            raise(ErrorKind::ConfigError, "missing required flag --" + std::string(s.name));
    return true;
}

Options make_options(const std::string& command, std::vector<OptSpec> extra) {
    Options opts;
    opts.command = command;
    opts.specs = kGlobalSpecs;
    opts.specs.insert(opts.specs.end(), extra.begin(), extra.end());
    return opts;
}

// Keys that change where or how output lands but not what is computed.
bool volatile_key(const std::string& name) {
    return name == "out" || name == "config" || name == "quiet";
}

std::string canonical_config(const Options& opts) {
    std::string text = "command=" + opts.command + "\n";
    std::vector<std::string> keys;
    for (const auto& [k, v] : opts.values)
        if (!volatile_key(k)) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (const std::string& k : keys) text += k + "=" + opts.values.at(k) + "\n";
    return text;
}

std::string config_fingerprint(const Options& opts) {
    return to_hex(fnv1a64(canonical_config(opts)));
}

std::string out_path(const Options& opts, const std::string& name) {
    return (std::filesystem::path(opts.str("out")) / name).string();
}

void write_run_config(const Options& opts) {
    char stamp[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    // The timestamp is the only nondeterministic byte any command emits, and
    // it lives in this one strippable header line.
    std::string text = "# generated " + std::string(stamp) + "\n";
    text += "fingerprint=" + config_fingerprint(opts) + "\n";
    text += canonical_config(opts);
    write_file_atomic(out_path(opts, "run_config.txt"), text);
}

void note(const Options& opts, const std::string& msg) {
    if (!opts.quiet()) std::printf("%s\n", msg.c_str());
}

flowgen::ToyDatasetSpec dataset_from(const Options& opts) {
    flowgen::ToyDatasetSpec spec;
    spec.mode_count = static_cast<int>(opts.integer("modes"));
    spec.mode_radius = opts.real("radius");
    spec.mode_sigma = opts.real("sigma");
    spec.samples_per_mode = static_cast<int>(opts.integer("samples-per-mode"));
    if (spec.mode_count < 2)
        raise(ErrorKind::ConfigError, "--modes must be >= 2, got " + opts.str("modes"));
    if (!(spec.mode_sigma > 0.0))
        raise(ErrorKind::ConfigError, "--sigma must be > 0, got " + opts.str("sigma"));
    if (spec.samples_per_mode < 1)
        raise(ErrorKind::ConfigError, "--samples-per-mode must be >= 1");
    return spec;
}

const std::vector<OptSpec> kDatasetSpecs = {
    {"modes", OptKind::Int, "8", "number of data modes / conditions"},
    {"radius", OptKind::Real, "4.0", "mode ring radius"},
    {"sigma", OptKind::Real, "0.25", "per-mode gaussian sigma"},
    {"samples-per-mode", OptKind::Int, "256", "dataset size per mode"},
};

std::vector<OptSpec> with_dataset(std::vector<OptSpec> extra) {
    extra.insert(extra.end(), kDatasetSpecs.begin(), kDatasetSpecs.end());
    return extra;
}

flowgen::FlowParams load_flow_checked(const Options& opts, const std::string& flag,
                                      int expect_modes) {
    flowgen::FlowParams p = flowgen::load_flow_params(opts.str(flag));
    if (p.shape.condition_count != expect_modes)
        raise(ErrorKind::ConfigError, opts.str(flag) + ": trained for " +
                                          std::to_string(p.shape.condition_count) +
                                          " conditions but --modes is " +
                                          std::to_string(expect_modes));
    return p;
}

reward::RewardSpec load_reward_checked(const Options& opts, int expect_modes) {
    reward::RewardSpec spec = reward::load_reward_spec(opts.str("reward"));
    if (spec.condition_count != expect_modes)
        raise(ErrorKind::ConfigError, opts.str("reward") + ": built for " +
                                          std::to_string(spec.condition_count) +
                                          " conditions but --modes is " +
                                          std::to_string(expect_modes));
    return spec;
}

numkit::RealVector load_bv(const std::string& path, int expect_dim) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    numkit::RealVector b;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
            raise(ErrorKind::ConfigError,
                  path + ":" + std::to_string(line_no) + ": bad vector entry '" + t + "'");
        b.push_back(v);
    }
    if (static_cast<int>(b.size()) != expect_dim)
        raise(ErrorKind::ConfigError, path + ": has " + std::to_string(b.size()) +
                                          " entries but the reward space is " +
                                          std::to_string(expect_dim) + "-dimensional");
    return b;
}

void save_vector(const std::string& path, const numkit::RealVector& v) {
    std::string text;
    for (double x : v) {
        text += format_double(x);
        text += '\n';
    }
    write_file_atomic(path, text);
}

align::AlignConfig align_config_from(const Options& opts, bool stage1) {
    align::AlignConfig cfg;
    cfg.omega = opts.real("omega");
    if (stage1)
        cfg.stage1_steps = static_cast<int>(opts.integer("steps"));
    else
        cfg.stage2_steps = static_cast<int>(opts.integer("steps"));
    if (stage1)
        cfg.lr_bv = opts.real("lr");
    else
        cfg.lr_gen = opts.real("lr");
    cfg.batch = static_cast<int>(opts.integer("batch"));
    cfg.grad_clip = opts.real("grad-clip");
    cfg.seed = opts.u64("seed");
    cfg.delta_ode = opts.real("delta");
    cfg.sample_steps = static_cast<int>(opts.integer("sample-steps"));
    align::validate(cfg);
    return cfg;
}

// ---- commands -------------------------------------------------------------

int cmd_train_flow(int argc, char** argv) {
    Options opts = make_options(
        "train-flow",
        with_dataset({
            {"steps", OptKind::Int, "5000", "training steps"},
            {"batch", OptKind::Int, "64", "batch size"},
            {"hidden", OptKind::Int, "64", "hidden width of the velocity net"},
            {"lr", OptKind::Real, "1e-3", "learning rate"},
            {"grad-clip", OptKind::Real, "0", "global-norm clip, 0 = off"},
        }));
    if (!parse_options(opts, argc, argv, 2)) return 0;

    const flowgen::ToyDatasetSpec dataset = dataset_from(opts);
    flowgen::FlowTrainConfig cfg;
    cfg.steps = static_cast<int>(opts.integer("steps"));
    cfg.batch = static_cast<int>(opts.integer("batch"));
    cfg.hidden_width = static_cast<int>(opts.integer("hidden"));
    cfg.adam.lr = opts.real("lr");
    cfg.grad_clip = opts.real("grad-clip");
    if (cfg.hidden_width < 1)
        raise(ErrorKind::ConfigError, "--hidden must be >= 1, got " + opts.str("hidden"));

    numkit::RandomStream stream(opts.u64("seed"));
    const flowgen::FlowParams p = flowgen::train_flow(dataset, cfg, stream);
    flowgen::save_flow_params(out_path(opts, "flow.txt"), p);
    write_run_config(opts);
    note(opts, "wrote " + out_path(opts, "flow.txt"));
    return 0;
}

int cmd_learn_bv(int argc, char** argv) {
    Options opts = make_options(
        "learn-bv",
        with_dataset({
            {"flow", OptKind::Str, nullptr, "trained generator parameter file"},
            {"omega", OptKind::Real, "1.5", "guidance scale (>= 1)"},
            {"steps", OptKind::Int, "3000", "stage-1 steps"},
            {"batch", OptKind::Int, "8", "batch size"},
            {"lr", OptKind::Real, "1e-2", "learning rate for b_v"},
            {"grad-clip", OptKind::Real, "0.1", "global-norm clip, 0 = off"},
            {"beta", OptKind::Real, "0.6", "planted text-bias strength"},
            {"embed-dim", OptKind::Int, "16", "reward embedding dimension"},
            {"delta", OptKind::Real, "0.04", "one-step reconstruction step size"},
            {"sample-steps", OptKind::Int, "25", "ODE steps when sampling x0"},
            {"stage1-from-dataset", OptKind::Flag, "", "draw stage-1 x0 from the data law"},
        }));
    if (!parse_options(opts, argc, argv, 2)) return 0;

    const flowgen::ToyDatasetSpec dataset = dataset_from(opts);
    const flowgen::FlowParams gen = load_flow_checked(opts, "flow", dataset.mode_count);

    const int dim = static_cast<int>(opts.integer("embed-dim"));
    numkit::RandomStream reward_stream = numkit::RandomStream(opts.u64("seed")).fork(kRewardStream);
    const reward::RewardSpec spec =
        reward::make_reward_spec(dataset, dim, opts.real("beta"), reward_stream);

    align::AlignConfig cfg = align_config_from(opts, true);
    cfg.stage1_from_dataset = opts.flag("stage1-from-dataset");

    std::vector<align::StepRecord> trace;
    const numkit::RealVector bv = align::stage1_learn_bv(gen, spec, dataset, cfg, &trace);

    reward::save_reward_spec(out_path(opts, "reward.txt"), spec);
    save_vector(out_path(opts, "bv.txt"), bv);
    write_file_atomic(out_path(opts, "stage1_loss.csv"), align::trace_csv(trace));
    write_run_config(opts);
    note(opts, "wrote " + out_path(opts, "bv.txt") + " (|b_v| = " +
                   format_double(numkit::norm2(bv)) + ")");
    return 0;
}

int cmd_align(int argc, char** argv) {
    Options opts = make_options(
        "align",
        with_dataset({
            {"flow", OptKind::Str, nullptr, "generator parameter file to align"},
            {"reward", OptKind::Str, nullptr, "reward spec file from learn-bv"},
            {"bv", OptKind::Str, "", "correction vector file (omit with --naive)"},
            {"naive", OptKind::Flag, "", "force b = 0 (collapse baseline)"},
            {"omega", OptKind::Real, "1.5", "guidance scale (>= 1)"},
            {"steps", OptKind::Int, "200", "stage-2 steps"},
            {"batch", OptKind::Int, "8", "batch size"},
            {"lr", OptKind::Real, "1e-3", "generator learning rate"},
            {"grad-clip", OptKind::Real, "0.1", "global-norm clip, 0 = off"},
            {"delta", OptKind::Real, "0.04", "one-step reconstruction step size"},
            {"sample-steps", OptKind::Int, "25", "ODE steps when sampling x0"},
        }));
    if (!parse_options(opts, argc, argv, 2)) return 0;

    const bool naive = opts.flag("naive");
    const std::string bv_path = opts.str("bv");
    if (naive == !bv_path.empty())
        raise(ErrorKind::ConfigError, "pass exactly one of --naive or --bv <file>");

    const flowgen::ToyDatasetSpec dataset = dataset_from(opts);
    const flowgen::FlowParams gen = load_flow_checked(opts, "flow", dataset.mode_count);
    const reward::RewardSpec spec = load_reward_checked(opts, dataset.mode_count);
    const numkit::RealVector b = naive ? numkit::RealVector(spec.dim, 0.0)
                                       : load_bv(bv_path, spec.dim);

    const align::AlignConfig cfg = align_config_from(opts, false);
    std::vector<align::StepRecord> trace;
    const flowgen::FlowParams aligned = align::stage2_align(gen, b, spec, dataset, cfg, &trace);

    flowgen::save_flow_params(out_path(opts, "flow_before.txt"), gen);
    flowgen::save_flow_params(out_path(opts, "flow_after.txt"), aligned);
    write_file_atomic(out_path(opts, "stage2_loss.csv"), align::trace_csv(trace));
    write_run_config(opts);
    note(opts, "wrote " + out_path(opts, "flow_after.txt"));
    return 0;
}

int cmd_eval(int argc, char** argv) {
    Options opts = make_options(
        "eval",
        with_dataset({
            {"flow", OptKind::Str, nullptr, "generator parameter file to evaluate"},
            {"reward", OptKind::Str, nullptr, "reward spec file"},
            {"bv", OptKind::Str, "", "correction vector file (default: zero vector)"},
            {"n-eval", OptKind::Int, "1000", "samples, >= 100 per condition"},
            {"eval-steps", OptKind::Int, "64", "ODE steps per sample"},
        }));
    if (!parse_options(opts, argc, argv, 2)) return 0;

    const flowgen::ToyDatasetSpec dataset = dataset_from(opts);
    const flowgen::FlowParams gen = load_flow_checked(opts, "flow", dataset.mode_count);
    const reward::RewardSpec spec = load_reward_checked(opts, dataset.mode_count);
    const std::string bv_path = opts.str("bv");
    const numkit::RealVector b = bv_path.empty() ? numkit::RealVector(spec.dim, 0.0)
                                                 : load_bv(bv_path, spec.dim);

    align::AlignConfig cfg;
    cfg.seed = opts.u64("seed");
    cfg.eval_steps = static_cast<int>(opts.integer("eval-steps"));
    if (cfg.eval_steps < 1) raise(ErrorKind::ConfigError, "--eval-steps must be >= 1");

    const align::Diagnostics d =
        align::evaluate(gen, dataset, spec, b, cfg, static_cast<int>(opts.integer("n-eval")));

    std::string text;
    text += "bias_recovery_cos=" + format_double(d.bias_recovery_cos) + "\n";
    text += "biased_reward_mean=" + format_double(d.biased_reward_mean) + "\n";
    text += "condition_hit_rate=" + format_double(d.condition_hit_rate) + "\n";
    text += "mode_entropy=" + format_double(d.mode_entropy) + "\n";
    text += "true_reward_mean=" + format_double(d.true_reward_mean) + "\n";
    write_file_atomic(out_path(opts, "diagnostics.txt"), text);
    write_run_config(opts);
    if (!opts.quiet()) std::fputs(text.c_str(), stdout);
    return 0;
}

int cmd_bench_gen(int argc, char** argv) {
    Options opts = make_options("bench-gen",
                                {
                                    {"dimension", OptKind::Str, "all",
                                     "id, style, layout, tonal, or all"},
                                    {"count", OptKind::Int, "800", "prompts per dimension"},
                                });
    if (!parse_options(opts, argc, argv, 2)) return 0;

    std::vector<bench::Dimension> dims;
    if (opts.str("dimension") == "all")
        dims = {bench::Dimension::Id, bench::Dimension::Style, bench::Dimension::Layout,
                bench::Dimension::Tonal};
    else
        dims = {bench::parse_dimension(opts.str("dimension"))};

    const int count = static_cast<int>(opts.integer("count"));
    std::size_t total = 0;
    for (bench::Dimension d : dims) {
        const std::vector<bench::PromptRecord> recs =
            bench::gen_prompts(d, bench::builtin_keyword_config(), count, opts.u64("seed"));
        const std::string path = out_path(opts, "prompts_" + bench::dimension_slug(d) + ".jsonl");
        bench::write_prompts_jsonl(path, recs);
        total += recs.size();
        note(opts, "wrote " + path + " (" + std::to_string(recs.size()) + " prompts)");
    }
    write_run_config(opts);
    note(opts, std::to_string(total) + " prompts total");
    return 0;
}

int run_metric(Options& opts, const std::string& which) {
    std::vector<bench::ReportRow> rows;
    if (which == "ids") {
        const auto feats = bench::read_features_jsonl(opts.str("features"));
        rows.push_back({"ids", opts.str("dimension"), 1, bench::ids(feats)});
    } else if (which == "asc") {
        const auto train = bench::read_features_jsonl(opts.str("train"));
        const auto test = bench::read_features_jsonl(opts.str("test"));
        const auto synth = bench::read_features_jsonl(opts.str("synth"));
        rows.push_back({"asc", opts.str("dimension"), 1, bench::asc(train, test, synth)});
    } else if (which == "sdi") {
        const auto sets = bench::read_box_sets_jsonl(opts.str("boxes"));
        const bench::BoxGroups groups = bench::group_boxes_by_prompt(sets);
        rows.push_back({"sdi", opts.str("dimension"), static_cast<int>(groups.size()),
                        bench::sdi(groups)});
    } else { // pvs
        const bench::TonalGroups groups =
            bench::tonal_groups_from_manifest(opts.str("manifest"));
        rows.push_back({"pvs", opts.str("dimension"), static_cast<int>(groups.size()),
                        bench::pvs(groups)});
    }
    const std::string csv = out_path(opts, "report_" + which + ".csv");
    bench::write_report_csv(csv, rows);
    bench::write_report_json(out_path(opts, "report_" + which + ".json"), rows,
                             config_fingerprint(opts), opts.u64("seed"));
    write_run_config(opts);
    note(opts, "wrote " + csv + " (" + which + " = " + format_double(rows.front().value) + ")");
    return 0;
}

int cmd_metric(int argc, char** argv) {
    if (argc < 3)
        raise(ErrorKind::ConfigError, "usage: divlab metric {ids|asc|sdi|pvs} [--flags]");
    const std::string which = argv[2];
    std::vector<OptSpec> extra;
    const char* default_dim = nullptr;
    if (which == "ids") {
        extra.push_back({"features", OptKind::Str, nullptr, "feature JSON-lines file"});
        default_dim = "ID";
    } else if (which == "asc") {
        extra.push_back({"train", OptKind::Str, nullptr, "reference training features"});
        extra.push_back({"test", OptKind::Str, nullptr, "real query features"});
        extra.push_back({"synth", OptKind::Str, nullptr, "synthetic query features"});
        default_dim = "Style";
    } else if (which == "sdi") {
        extra.push_back({"boxes", OptKind::Str, nullptr, "box JSON-lines file, grouped by prompt_id"});
        default_dim = "Layout";
    } else if (which == "pvs") {
        extra.push_back({"manifest", OptKind::Str, nullptr, "image manifest JSON-lines file"});
        default_dim = "Tonal";
    } else {
        raise(ErrorKind::ConfigError, "unknown metric '" + which + "' (ids, asc, sdi, pvs)");
    }
    extra.push_back({"dimension", OptKind::Str, default_dim, "dimension label for the report"});
    Options opts = make_options("metric " + which, extra);
    if (!parse_options(opts, argc, argv, 3)) return 0;
    return run_metric(opts, which);
}

int cmd_report(int argc, char** argv) {
    Options opts = make_options(
        "report", {{"dir", OptKind::Str, nullptr, "directory holding report_*.csv files"}});
    if (!parse_options(opts, argc, argv, 2)) return 0;

    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(opts.str("dir"))) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("report_", 0) == 0 && name.size() > 4 &&
            name.compare(name.size() - 4, 4, ".csv") == 0)
            files.push_back(entry.path().string());
    }
    if (files.empty())
        raise(ErrorKind::ConfigError, opts.str("dir") + ": no report_*.csv files found");
    std::sort(files.begin(), files.end());

    std::vector<bench::ReportRow> rows;
    for (const std::string& f : files) {
        const auto part = bench::read_report_csv(f);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    bench::write_report_csv(out_path(opts, "report.csv"), rows);
    bench::write_report_json(out_path(opts, "report.json"), rows, config_fingerprint(opts),
                             opts.u64("seed"));
    write_run_config(opts);
    note(opts, "merged " + std::to_string(files.size()) + " report(s) into " +
                   out_path(opts, "report.csv"));
    return 0;
}

void print_usage() {
    std::fputs(
        "divlab: toy reward-correction alignment lab and diversity benchmark tools\n"
        "\n"
        "usage: divlab <command> [--flags]\n"
        "\n"
        "commands:\n"
        "  train-flow   train the toy conditional flow generator\n"
        "  learn-bv     stage 1: learn the reward-correction direction b_v\n"
        "  align        stage 2: align the generator (--naive for the b = 0 baseline)\n"
        "  eval         sample a generator and write diagnostics\n"
        "  bench-gen    generate benchmark prompt files\n"
        "  metric       score inputs: metric {ids|asc|sdi|pvs}\n"
        "  report       merge per-metric reports from a directory\n"
        "\n"
        "global flags: --seed N, --config FILE, --out DIR, --quiet\n"
        "run 'divlab <command> --help' for per-command flags\n",
        stdout);
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::UnknownDimension:
    case ErrorKind::UnknownCondition:
    case ErrorKind::TimeOutOfRange:
    case ErrorKind::DomainError:
        return 2;
    case ErrorKind::DivergenceDetected:
    case ErrorKind::NonFiniteState:
    case ErrorKind::NonFiniteEvaluation:
    case ErrorKind::AlphaUnderflow:
    case ErrorKind::InfeasibleCount:
        return 3;
    default:
        return 4; // data-shaped failures
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        print_usage();
        return 2;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        print_usage();
        return 0;
    }
    try {
        if (command == "train-flow") return cmd_train_flow(argc, argv);
        if (command == "learn-bv") return cmd_learn_bv(argc, argv);
        if (command == "align") return cmd_align(argc, argv);
        if (command == "eval") return cmd_eval(argc, argv);
        if (command == "bench-gen") return cmd_bench_gen(argc, argv);
        if (command == "metric") return cmd_metric(argc, argv);
        if (command == "report") return cmd_report(argc, argv);
        std::fprintf(stderr, "error: unknown command '%s'\n", command.c_str());
        print_usage();
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
