#include "divlab/flowgen/params_io.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "divlab/error.hpp"
#include "divlab/io_util.hpp"

namespace divlab::flowgen {

namespace {

// Pulls "key=value" off a header like "divlab-params v1 kind=flow ...".
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

long long header_int(const std::string& header, const std::string& key,
                     const std::string& origin) {
    std::string v = header_field(header, key, origin);
    char* end = nullptr;
    long long n = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        raise(ErrorKind::ConfigError, origin + ": bad integer for '" + key + "'");
    return n;
}

} // namespace

std::string serialize_flow_params(const FlowParams& p) {
    std::ostringstream out;
    out << "divlab-params v1 kind=flow conditions=" << p.shape.condition_count
        << " hidden=" << p.shape.hidden_width << " count=" << p.w.size()
        << " seed=" << p.seed << "\n";
    char buf[64];
    for (double w : p.w) {
        std::snprintf(buf, sizeof buf, "%.17g\n", w);
        out << buf;
    }
    return out.str();
}

FlowParams parse_flow_params(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header) || header.rfind("divlab-params v1 ", 0) != 0)
        raise(ErrorKind::ConfigError, origin + ": not a divlab-params v1 file");
    if (header_field(header, "kind", origin) != "flow")
        raise(ErrorKind::ConfigError, origin + ": kind is not 'flow'");

    FlowParams p;
    p.shape.condition_count = static_cast<int>(header_int(header, "conditions", origin));
    p.shape.hidden_width = static_cast<int>(header_int(header, "hidden", origin));
    p.seed = static_cast<std::uint64_t>(header_int(header, "seed", origin));
    long long count = header_int(header, "count", origin);
    if (p.shape.condition_count < 1 || p.shape.hidden_width < 1 ||
        count != static_cast<long long>(p.shape.param_count()))
        raise(ErrorKind::ConfigError, origin + ": architecture fingerprint mismatch");

    p.w.reserve(static_cast<std::size_t>(count));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || !std::isfinite(v))
            raise(ErrorKind::ConfigError, origin + ": bad parameter line '" + line + "'");
        p.w.push_back(v);
    }
    if (p.w.size() != static_cast<std::size_t>(count))
        raise(ErrorKind::ConfigError, origin + ": expected " + std::to_string(count) +
                                          " parameters, found " + std::to_string(p.w.size()));
    return p;
}

void save_flow_params(const std::string& path, const FlowParams& p) {
    write_file_atomic(path, serialize_flow_params(p));
}

FlowParams load_flow_params(const std::string& path) {
    return parse_flow_params(read_file(path), path);
}

} // namespace divlab::flowgen
