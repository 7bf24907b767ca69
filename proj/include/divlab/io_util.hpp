#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace divlab {

// Whole-file read; raises ConfigError when the file cannot be opened.
std::string read_file(const std::string& path);
std::vector<std::uint8_t> read_file_bytes(const std::string& path);

// Write-temp-then-rename so readers never observe a half-written artifact.
void write_file_atomic(const std::string& path, const std::string& content);

// FNV-1a over the given text; stable fingerprint for configs and traces.
std::uint64_t fnv1a64(const std::string& text);
std::string to_hex(std::uint64_t v);

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

} // namespace divlab
