#pragma once

#include <string>

namespace cskd {

// Reads a whole file. Throws cskd::Error if it cannot be opened.
std::string read_file(const std::string& path);

// Writes to "<path>.tmp" and renames over `path`, so readers never see a
// partial file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cskd
