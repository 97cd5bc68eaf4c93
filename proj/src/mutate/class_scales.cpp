#include "mutate/class_scales.hpp"

#include "core/embedded.hpp"
#include "core/error.hpp"
#include "core/fsutil.hpp"

namespace diffspot::mutate {

namespace {

std::vector<ScaleAxis> parse_operator_scales(const nlohmann::json& spec) {
    std::vector<ScaleAxis> axes;

    if (spec.contains("axes")) {
        for (const auto& axis_json : spec.at("axes")) {
            ScaleAxis axis;
            axis.property = axis_json.at("property").get<std::string>();
            axis.circular = axis_json.value("circular", false);
            for (const auto& t : axis_json.at("tokens")) {
                axis.tokens.push_back(t.get<std::string>());
            }
            if (axis.tokens.size() < 2) {
                throw Error(ErrorCode::config, "scale axis needs at least 2 tokens");
            }
            axes.push_back(std::move(axis));
        }
    }

    if (spec.contains("numeric")) {
        const auto& grid = spec.at("numeric");
        for (const auto& p : grid.at("prefixes")) {
            ScaleAxis axis;
            axis.property = p.at("property").get<std::string>();
            const std::string prefix = p.at("prefix").get<std::string>();
            for (const auto& v : grid.at("values")) {
                axis.tokens.push_back(prefix + v.get<std::string>());
            }
            axes.push_back(std::move(axis));
        }
    }

    if (spec.contains("shade_grid")) {
        const auto& grid = spec.at("shade_grid");
        for (const auto& p : grid.at("prefixes")) {
            const std::string prefix = p.at("prefix").get<std::string>();
            const std::string property = p.at("property").get<std::string>();
            for (const auto& hue : grid.at("hues")) {
                ScaleAxis axis;
                axis.property = property;
                for (const auto& shade : grid.at("shades")) {
                    axis.tokens.push_back(prefix + hue.get<std::string>() + "-" +
                                          std::to_string(shade.get<int>()));
                }
                axes.push_back(std::move(axis));
            }
        }
    }

    if (axes.empty()) {
        throw Error(ErrorCode::config, "operator scale spec defines no axes");
    }
    return axes;
}

}  // namespace

ClassScales ClassScales::from_json(const nlohmann::json& doc) {
    try {
        ClassScales scales;
        scales.version = doc.value("version", 0);
        for (const auto& [op_name, spec] : doc.at("operators").items()) {
            scales.by_operator_[op_name] = parse_operator_scales(spec);
        }
        return scales;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config,
                    std::string("malformed class scales document: ") + e.what());
    }
}

ClassScales ClassScales::from_file(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(fsutil::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::config,
                    "class scales file " + path + " is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

const ClassScales& ClassScales::builtin() {
    static const ClassScales scales = from_json(
        nlohmann::json::parse(embedded_data("class_scales.json")));
    return scales;
}

const std::vector<ScaleAxis>* ClassScales::axes_for(
    const std::string& operator_name) const {
    const auto it = by_operator_.find(operator_name);
    return it == by_operator_.end() ? nullptr : &it->second;
}

std::optional<std::pair<size_t, size_t>> ClassScales::find_token(
    const std::string& operator_name, const std::string& token) const {
    const auto* axes = axes_for(operator_name);
    if (!axes) return std::nullopt;
    for (size_t a = 0; a < axes->size(); ++a) {
        const auto& tokens = (*axes)[a].tokens;
        for (size_t t = 0; t < tokens.size(); ++t) {
            if (tokens[t] == token) return std::make_pair(a, t);
        }
    }
    return std::nullopt;
}

}  // namespace diffspot::mutate
