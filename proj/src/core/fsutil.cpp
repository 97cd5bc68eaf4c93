#include "core/fsutil.hpp"

#include <algorithm>
#include <fstream>

#include "core/error.hpp"

namespace diffspot::fsutil {

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open file: " + path.string());
    std::string out;
    in.seekg(0, std::ios::end);
    out.resize(size_t(in.tellg()));
    in.seekg(0);
    in.read(out.data(), std::streamsize(out.size()));
    if (!in && out.size() > 0) throw Error(ErrorCode::io, "short read: " + path.string());
    return out;
}

std::vector<uint8_t> read_binary_file(const fs::path& path) {
    std::string s = read_text_file(path);
    return std::vector<uint8_t>(s.begin(), s.end());
}

static void write_atomic_impl(const fs::path& path, const void* data, size_t len) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::io, "cannot open for write: " + tmp.string());
        out.write(static_cast<const char*>(data), std::streamsize(len));
        if (!out) throw Error(ErrorCode::io, "write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    write_atomic_impl(path, content.data(), content.size());
}

void write_file_atomic(const fs::path& path, const std::vector<uint8_t>& content) {
    write_atomic_impl(path, content.data(), content.size());
}

void ensure_dir(const fs::path& dir) { fs::create_directories(dir); }

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension) {
    if (!fs::is_directory(dir))
        throw Error(ErrorCode::io, "not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension)
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace diffspot::fsutil
