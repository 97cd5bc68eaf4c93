#pragma once

#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/fsutil.hpp"

namespace diffspot::jsonl {

using json = nlohmann::json;

inline std::vector<json> read_all(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open jsonl: " + path.string());
    std::vector<json> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::io, path.string() + ":" + std::to_string(lineno) +
                                           ": bad jsonl record: " + e.what());
        }
    }
    return out;
}

// One compact JSON object per line. Serialization is deterministic:
// nlohmann::json objects keep keys sorted.
inline std::string to_lines(const std::vector<json>& records) {
    std::string out;
    for (const auto& r : records) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

inline void write_all(const std::filesystem::path& path, const std::vector<json>& records) {
    fsutil::write_file_atomic(path, to_lines(records));
}

}  // namespace diffspot::jsonl
