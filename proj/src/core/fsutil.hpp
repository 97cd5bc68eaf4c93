#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace diffspot::fsutil {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path);
std::vector<uint8_t> read_binary_file(const fs::path& path);

// Writes via a temp sibling then renames into place, so readers never see a
// half-written artifact.
void write_file_atomic(const fs::path& path, std::string_view content);
void write_file_atomic(const fs::path& path, const std::vector<uint8_t>& content);

void ensure_dir(const fs::path& dir);

// Sorted list of regular files matching the extension (e.g. ".html").
std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension);

}  // namespace diffspot::fsutil
