#include "divlab/reward/reward_io.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "divlab/error.hpp"
#include "divlab/io_util.hpp"

namespace divlab::reward {

namespace {

std::string header_field(const std::string& header, const std::string& key,
                         const std::string& origin) {
    std::istringstream ss(header);
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq != std::string::npos && tok.substr(0, eq) == key) return tok.substr(eq + 1);
    }
    raise(ErrorKind::ConfigError, origin + ": header missing field '" + key + "'");
}

std::size_t payload_count(const RewardSpec& s) {
    std::size_t d = static_cast<std::size_t>(s.dim);
    std::size_t k = static_cast<std::size_t>(s.condition_count);
    return 2 * d + d + 2 * d + d + d + d + k * d;
}

} // namespace

std::string serialize_reward_spec(const RewardSpec& spec) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", spec.beta);
    out << "divlab-params v1 kind=reward conditions=" << spec.condition_count
        << " dim=" << spec.dim << " count=" << payload_count(spec) << " beta=" << buf << "\n";
    auto emit = [&](const std::vector<double>& v) {
        for (double x : v) {
            std::snprintf(buf, sizeof buf, "%.17g\n", x);
            out << buf;
        }
    };
    emit(spec.w_lin);
    emit(spec.b_lin);
    emit(spec.v_nl);
    emit(spec.c_nl);
    emit(spec.s_nl);
    emit(spec.u_bias);
    for (const auto& row : spec.text_table) emit(row);
    return out.str();
}

RewardSpec parse_reward_spec(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("divlab-params v1 ", 0) != 0)
        raise(ErrorKind::ConfigError, origin + ": not a divlab-params v1 file");
    if (header_field(header, "kind", origin) != "reward")
        raise(ErrorKind::ConfigError, origin + ": kind is not 'reward'");

    RewardSpec spec;
    spec.condition_count = std::atoi(header_field(header, "conditions", origin).c_str());
    spec.dim = std::atoi(header_field(header, "dim", origin).c_str());
    spec.beta = std::strtod(header_field(header, "beta", origin).c_str(), nullptr);
    if (spec.condition_count < 1 || spec.dim < 4 || !std::isfinite(spec.beta) || spec.beta < 0.0)
        raise(ErrorKind::ConfigError, origin + ": bad reward header");
    std::size_t want = payload_count(spec);
    if (std::to_string(want) != header_field(header, "count", origin))
        raise(ErrorKind::ConfigError, origin + ": architecture fingerprint mismatch");

    std::vector<double> vals;
    vals.reserve(want);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || !std::isfinite(v))
            raise(ErrorKind::ConfigError, origin + ": bad parameter line '" + line + "'");
        vals.push_back(v);
    }
    if (vals.size() != want)
        raise(ErrorKind::ConfigError, origin + ": expected " + std::to_string(want) +
                                          " parameters, found " + std::to_string(vals.size()));

    std::size_t d = static_cast<std::size_t>(spec.dim);
    auto take = [&, pos = std::size_t{0}](std::size_t n) mutable {
        std::vector<double> v(vals.begin() + static_cast<std::ptrdiff_t>(pos),
                              vals.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
        return v;
    };
    spec.w_lin = take(2 * d);
    spec.b_lin = take(d);
    spec.v_nl = take(2 * d);
    spec.c_nl = take(d);
    spec.s_nl = take(d);
    spec.u_bias = take(d);
    for (int k = 0; k < spec.condition_count; ++k) spec.text_table.push_back(take(d));
    return spec;
}

void save_reward_spec(const std::string& path, const RewardSpec& spec) {
    write_file_atomic(path, serialize_reward_spec(spec));
}

RewardSpec load_reward_spec(const std::string& path) {
    return parse_reward_spec(read_file(path), path);
}

} // namespace divlab::reward
