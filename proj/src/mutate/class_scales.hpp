#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace diffspot::mutate {

// One ordered scale. A swap moves a class token along the token list; the
// magnitude is the index distance (shortest way around when circular).
struct ScaleAxis {
    std::string property;  // CSS property the scale controls (record metadata)
    std::vector<std::string> tokens;
    bool circular = false;
};

// Expanded taxonomy: operator name -> ordered axes. Data-file spec forms
// (explicit token lists, numeric prefix grids, color shade grids) are all
// flattened to plain axes at load time.
class ClassScales {
public:
    static ClassScales from_json(const nlohmann::json& doc);
    static ClassScales from_file(const std::string& path);
    // The taxonomy compiled into the library (data/class_scales.json).
    static const ClassScales& builtin();

    const std::vector<ScaleAxis>* axes_for(const std::string& operator_name) const;

    // Locates `token` in one of the operator's axes; returns (axis index,
    // token index) or nullopt. Exact fullmatch only.
    std::optional<std::pair<size_t, size_t>> find_token(
        const std::string& operator_name, const std::string& token) const;

    int version = 0;

private:
    std::map<std::string, std::vector<ScaleAxis>> by_operator_;
};

}  // namespace diffspot::mutate
