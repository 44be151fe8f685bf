#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace heis {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view s);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace heis
