#pragma once

#include <string>

namespace edgetrack {

std::string read_file(const std::string& path);

/// Writes via a temp file + rename so partially written outputs never appear.
void write_file_atomic(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);

}  // namespace edgetrack
