#pragma once

#include <string>

namespace q1d::io {

std::string read_text_file(const std::string& path);

/// Writes to `<path>.tmp` and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace q1d::io
