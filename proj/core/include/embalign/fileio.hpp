#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace embalign {

/// Reads a whole file. Throws IoError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so a
/// reader never observes a truncated file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace embalign
