#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bayesum {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Splits on tabs, keeping empty fields.
std::vector<std::string_view> split_tabs(std::string_view line);

/// "%.17g": round-trips every double.
std::string format_double(double v);

}  // namespace bayesum
