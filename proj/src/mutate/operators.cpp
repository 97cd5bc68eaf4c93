#include "mutate/operators.hpp"

#include "core/error.hpp"

namespace diffspot::mutate {

const std::vector<Operator>& all_operators() {
    static const std::vector<Operator> ops = {
        {"font_weight", OperatorFamily::typography, OperatorKind::step_based},
        {"font_size", OperatorFamily::typography, OperatorKind::step_based},
        {"letter_spacing", OperatorFamily::typography, OperatorKind::continuous},
        {"line_height", OperatorFamily::typography, OperatorKind::continuous},
        {"text", OperatorFamily::typography, OperatorKind::text_substitution},
        {"color", OperatorFamily::color, OperatorKind::step_based},
        {"opacity", OperatorFamily::color, OperatorKind::step_based},
        {"gradient", OperatorFamily::color, OperatorKind::step_based},
        {"position", OperatorFamily::layout, OperatorKind::step_based},
        {"spacing", OperatorFamily::layout, OperatorKind::step_based},
        {"justify", OperatorFamily::layout, OperatorKind::step_based},
        {"border", OperatorFamily::shape, OperatorKind::step_based},
        {"rounded", OperatorFamily::shape, OperatorKind::step_based},
    };
    return ops;
}

const Operator* find_operator(const std::string& name) {
    for (const auto& op : all_operators()) {
        if (op.name == name) return &op;
    }
    return nullptr;
}

const char* family_name(OperatorFamily f) {
    switch (f) {
        case OperatorFamily::typography: return "typography";
        case OperatorFamily::color: return "color";
        case OperatorFamily::layout: return "layout";
        case OperatorFamily::shape: return "shape";
    }
    return "unknown";
}

const char* kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::step_based: return "step_based";
        case OperatorKind::continuous: return "continuous";
        case OperatorKind::text_substitution: return "text_substitution";
    }
    return "unknown";
}

const char* tier_name(Tier t) {
    switch (t) {
        case Tier::easy: return "Easy";
        case Tier::medium: return "Medium";
        case Tier::hard: return "Hard";
    }
    return "unknown";
}

Tier tier_from_name(const std::string& name) {
    if (name == "Easy") return Tier::easy;
    if (name == "Medium") return Tier::medium;
    if (name == "Hard") return Tier::hard;
    throw Error(ErrorCode::invalid, "unknown tier '" + name + "'");
}

TierParams tier_params(const Operator& op, Tier tier) {
    TierParams p;
    p.tier = tier;
    switch (op.kind) {
        case OperatorKind::step_based:
            switch (tier) {
                case Tier::easy: p.step_min = 3; p.step_max = 5; break;
                case Tier::medium: p.step_min = 2; p.step_max = 2; break;
                case Tier::hard: p.step_min = 1; p.step_max = 1; break;
            }
            break;
        case OperatorKind::continuous:
            switch (tier) {
                case Tier::easy: p.em_magnitude = 0.20; break;
                case Tier::medium: p.em_magnitude = 0.12; break;
                case Tier::hard: p.em_magnitude = 0.06; break;
            }
            break;
        case OperatorKind::text_substitution:
            switch (tier) {
                case Tier::easy: p.char_min = 5; p.char_max = -1; break;  // 5+
                case Tier::medium: p.char_min = 2; p.char_max = 4; break;
                case Tier::hard: p.char_min = 1; p.char_max = 1; break;
            }
            break;
    }
    return p;
}

}  // namespace diffspot::mutate
