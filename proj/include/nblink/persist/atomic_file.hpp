#pragma once

#include <filesystem>
#include <string>

namespace nblink::persist {

/// Writes content to a sibling temporary file and renames it over path, so
/// the target is either the complete new file or untouched.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Whole file contents; throws std::runtime_error naming the path.
std::string read_file(const std::filesystem::path& path);

}  // namespace nblink::persist
