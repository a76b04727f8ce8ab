#ifndef PREPLY_COMMON_FILE_UTIL_H_
#define PREPLY_COMMON_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace preply {

std::string read_file(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, so readers never observe a
// half-written file.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace preply

#endif  // PREPLY_COMMON_FILE_UTIL_H_
