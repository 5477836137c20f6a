#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace wikibox {

// Throws ConfigError when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// Writes via a sibling temp file and rename, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Shortest decimal representation that round-trips the double. Stable
// across platforms for IEEE-754 doubles; used by every emitted artifact.
std::string format_double(double value);

// Fixed decimals, for geometry where a stable width reads better.
std::string format_fixed(double value, int precision);

}  // namespace wikibox
