#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "html/dom.hpp"
#include "mutate/class_scales.hpp"
#include "mutate/operators.hpp"

namespace diffspot::mutate {

struct MutationRecord {
    std::string operator_name;
    std::string mechanism;  // class_swap | inline_override | text_edit
    std::string selector;
    std::string property;
    std::string old_value;
    std::string new_value;
    std::string tier;  // Easy | Medium | Hard
    double magnitude = 0.0;  // steps, em offset, or substituted-char count
    uint64_t seed = 0;

    nlohmann::json to_json() const;
    static MutationRecord from_json(const nlohmann::json& j);
};

enum class MutateStatus { ok, not_applicable, no_valid_step };
const char* mutate_status_name(MutateStatus s);

struct MutateOutcome {
    MutateStatus status = MutateStatus::not_applicable;
    std::string html;  // full mutated document (status == ok)
    MutationRecord record;
};

struct TargetRef {
    const html::Node* element = nullptr;
    std::string selector;
};

// All elements the operator can act on, each with its structural selector.
std::vector<TargetRef> enumerate_targets(const html::Document& doc, const Operator& op,
                                         const ClassScales& scales);

MutateOutcome apply_class_swap(const std::string& html_source,
                               const std::string& selector, const Operator& op,
                               Tier tier, uint64_t seed, const ClassScales& scales);

MutateOutcome apply_inline_override(const std::string& html_source,
                                    const std::string& selector, const Operator& op,
                                    Tier tier, uint64_t seed);

MutateOutcome apply_text_edit(const std::string& html_source,
                              const std::string& selector, Tier tier, uint64_t seed);

struct MutationCandidate {
    std::string tier;
    std::string html;
    MutationRecord record;
};

struct GroupResult {
    MutateStatus status = MutateStatus::not_applicable;
    std::string selector;  // the shared target (status == ok)
    std::vector<MutationCandidate> candidates;  // tier order, omitted tiers absent
    std::vector<std::string> omitted_tiers;
};

// Grouped mode: one target element, one mechanism, up to one candidate per
// tier. Deterministic in (html, operator, seed).
GroupResult mutate_grouped(const std::string& html_source, const Operator& op,
                           uint64_t seed, const ClassScales& scales);

// Undoes a mutation given its record; the result parses tree-equal to the
// original document. (For text_edit the stored values are 50-char prefixes,
// so fidelity holds for texts within that bound.)
std::string revert_mutation(const std::string& mutated_html,
                            const MutationRecord& record);

}  // namespace diffspot::mutate
