#pragma once

#include <string>
#include <vector>

namespace diffspot::mutate {

enum class OperatorKind { step_based, continuous, text_substitution };
enum class OperatorFamily { typography, color, layout, shape };

struct Operator {
    std::string name;
    OperatorFamily family;
    OperatorKind kind;
};

// The 13 operators, in canonical order.
const std::vector<Operator>& all_operators();
const Operator* find_operator(const std::string& name);

const char* family_name(OperatorFamily f);
const char* kind_name(OperatorKind k);

enum class Tier { easy, medium, hard };
inline const Tier kAllTiers[] = {Tier::easy, Tier::medium, Tier::hard};
const char* tier_name(Tier t);
Tier tier_from_name(const std::string& name);

// Magnitude parameters per (kind, tier). Exactly one of the three blocks is
// meaningful, selected by the operator's kind.
struct TierParams {
    Tier tier;
    // step_based: inclusive scale-index distance range.
    int step_min = 0;
    int step_max = 0;
    // continuous: absolute em offset (sign chosen at mutation time).
    double em_magnitude = 0.0;
    // text_substitution: inclusive substituted-character count range;
    // char_max < 0 means unbounded above.
    int char_min = 0;
    int char_max = 0;
};

TierParams tier_params(const Operator& op, Tier tier);

}  // namespace diffspot::mutate
