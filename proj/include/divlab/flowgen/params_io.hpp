#pragma once

#include <string>

#include "divlab/flowgen/velocity_net.hpp"

namespace divlab::flowgen {

// Textual format: one header line carrying the architecture fingerprint and
// seed, then one parameter per line at 17 significant digits:
//
//   divlab-params v1 kind=flow conditions=8 hidden=64 count=5058 seed=42
//   -0.0123...
//
// Loaders verify the fingerprint and the line count and refuse anything that
// does not match (ConfigError).
std::string serialize_flow_params(const FlowParams& p);
FlowParams parse_flow_params(const std::string& text, const std::string& origin);

void save_flow_params(const std::string& path, const FlowParams& p);
FlowParams load_flow_params(const std::string& path);

} // namespace divlab::flowgen
