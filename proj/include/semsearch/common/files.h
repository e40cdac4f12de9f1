#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace semsearch {

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temporary and renames it into place, so readers
// never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace semsearch
