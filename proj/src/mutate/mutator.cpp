#include "mutate/mutator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "core/error.hpp"
#include "core/hash.hpp"
#include "core/rng.hpp"
#include "core/strings.hpp"
#include "html/selector.hpp"
#include "mutate/tree_diff.hpp"

namespace diffspot::mutate {

namespace {

constexpr size_t kTextPrefixLen = 50;

// Decorrelated sub-seed for a named draw within one mutation group.
uint64_t subseed(uint64_t seed, const std::string& label) {
    return fnv1a64(label, seed ^ 0x9e3779b97f4a7c15ull);
}

std::string fmt_em(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf) + "em";
}

bool has_variant_prefix(const std::string& token) {
    return token.find(':') != std::string::npos;
}

struct ClassToken {
    std::string text;
    size_t offset;  // byte offset inside the attribute value
};

std::vector<ClassToken> tokenize_with_offsets(std::string_view value) {
    std::vector<ClassToken> out;
    size_t i = 0;
    while (i < value.size()) {
        while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
        const size_t b = i;
        while (i < value.size() && !std::isspace(static_cast<unsigned char>(value[i]))) ++i;
        if (i > b) out.push_back({std::string(value.substr(b, i - b)), b});
    }
    return out;
}

int axis_distance(const ScaleAxis& axis, size_t i, size_t j) {
    const int linear = std::abs(int(i) - int(j));
    if (!axis.circular) return linear;
    return std::min(linear, int(axis.tokens.size()) - linear);
}

// Positions of substitutable characters: ASCII letters and digits outside
// `&...;` entity spans (rewriting entity bytes would change the markup, not
// just the visible text).
std::vector<size_t> substitutable_positions(const std::string& text) {
    std::vector<bool> in_entity(text.size(), false);
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '&') continue;
        for (size_t j = i + 1; j < text.size() && j <= i + 9; ++j) {
            const char c = text[j];
            if (c == ';') {
                for (size_t k = i; k <= j; ++k) in_entity[k] = true;
                break;
            }
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '#') break;
        }
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < text.size(); ++i) {
        if (!in_entity[i] && std::isalnum(static_cast<unsigned char>(text[i]))) {
            out.push_back(i);
        }
    }
    return out;
}

char substitute_char(char orig, Rng& rng) {
    if (orig >= '0' && orig <= '9') {
        char c;
        do { c = char('0' + rng.bounded(10)); } while (c == orig);
        return c;
    }
    const bool upper = orig >= 'A' && orig <= 'Z';
    const char base = upper ? 'A' : 'a';
    char c;
    do { c = char(base + rng.bounded(26)); } while (c == orig);
    return c;
}

bool is_excluded_tag(const std::string& tag) {
    static const std::set<std::string> excluded = {
        "script", "style", "title", "textarea", "head",
        "meta",   "link",  "base",  "noscript",
    };
    return excluded.count(tag) != 0;
}

// True when the style attribute already declares `property` with !important.
bool style_declares_important(std::string_view style_value, std::string_view property) {
    for (const auto& decl : split(style_value, ';')) {
        const auto colon = decl.find(':');
        if (colon == std::string::npos) continue;
        if (to_lower(trim(decl.substr(0, colon))) != property) continue;
        if (to_lower(decl.substr(colon + 1)).find("!important") != std::string::npos) {
            return true;
        }
    }
    return false;
}

void verify_single_edit(const std::string& before, const std::string& after,
                        bool text_edit, const std::string& context) {
    const auto diff = tree_diff(html::parse(before), html::parse(after));
    const bool ok = text_edit ? diff.single_text_edit() : diff.single_attribute_edit();
    if (!ok) {
        throw Error(ErrorCode::internal,
                    "mutation is not a single edit (" + context + "): structure_equal=" +
                        (diff.structure_equal ? "yes" : "no") + " attr_changes=" +
                        std::to_string(diff.attr_changes.size()) + " text_changes=" +
                        std::to_string(diff.text_changes.size()));
    }
}

// Direct text children of an element, in order.
std::vector<const html::Node*> own_text_nodes(const html::Node* el) {
    std::vector<const html::Node*> out;
    for (const auto& c : el->children) {
        if (c->is_text()) out.push_back(c.get());
    }
    return out;
}

std::string own_text_of(const html::Node* el) {
    std::string out;
    for (const auto* t : own_text_nodes(el)) out += t->text;
    return out;
}

struct SwapMove {
    size_t occurrence;  // index into the class-token list
    size_t axis;
    size_t from;
    size_t to;
    int distance;
};

MutateOutcome class_swap_impl(const std::string& src, const std::string& selector,
                              const Operator& op, Tier tier, uint64_t seed,
                              const ClassScales& scales,
                              std::optional<size_t> fixed_occurrence) {
    MutateOutcome out;
    const auto doc = html::parse(src);
    const auto els = html::select_all(doc, selector);
    if (els.empty()) return out;  // not_applicable
    const html::Node* el = els.front();

    const html::Attr* cls = el->find_attr("class");
    if (!cls || !cls->has_value) return out;
    const auto tokens = tokenize_with_offsets(cls->value);

    struct Applicable { size_t occurrence, axis, index; };
    std::vector<Applicable> applicable;
    for (size_t k = 0; k < tokens.size(); ++k) {
        if (has_variant_prefix(tokens[k].text)) continue;
        if (fixed_occurrence && *fixed_occurrence != k) continue;
        if (const auto hit = scales.find_token(op.name, tokens[k].text)) {
            applicable.push_back({k, hit->first, hit->second});
        }
    }
    if (applicable.empty()) return out;  // not_applicable

    const TierParams params = tier_params(op, tier);
    const auto* axes = scales.axes_for(op.name);
    std::vector<SwapMove> moves;
    for (const auto& a : applicable) {
        const ScaleAxis& axis = (*axes)[a.axis];
        for (size_t j = 0; j < axis.tokens.size(); ++j) {
            if (j == a.index) continue;
            const int d = axis_distance(axis, a.index, j);
            if (d >= params.step_min && d <= params.step_max) {
                moves.push_back({a.occurrence, a.axis, a.index, j, d});
            }
        }
    }
    if (moves.empty()) {
        out.status = MutateStatus::no_valid_step;
        return out;
    }

    Rng rng(seed);
    const SwapMove& move = moves[rng.bounded(moves.size())];
    const ScaleAxis& axis = (*axes)[move.axis];
    const std::string& old_token = axis.tokens[move.from];
    const std::string& new_token = axis.tokens[move.to];

    const size_t abs_begin = cls->value_span.begin + tokens[move.occurrence].offset;
    std::string mutated = src.substr(0, abs_begin);
    mutated += new_token;
    mutated += src.substr(abs_begin + old_token.size());

    out.status = MutateStatus::ok;
    out.html = std::move(mutated);
    out.record.operator_name = op.name;
    out.record.mechanism = "class_swap";
    out.record.selector = selector;
    out.record.property = axis.property;
    out.record.old_value = old_token;
    out.record.new_value = new_token;
    out.record.tier = tier_name(tier);
    out.record.magnitude = move.distance;
    out.record.seed = seed;

    verify_single_edit(src, out.html, false, op.name + " class_swap " + selector);
    return out;
}

}  // namespace

const char* mutate_status_name(MutateStatus s) {
    switch (s) {
        case MutateStatus::ok: return "ok";
        case MutateStatus::not_applicable: return "not_applicable";
        case MutateStatus::no_valid_step: return "no_valid_step";
    }
    return "unknown";
}

nlohmann::json MutationRecord::to_json() const {
    return {
        {"operator", operator_name},
        {"mechanism", mechanism},
        {"selector", selector},
        {"property", property},
        {"old_value", old_value},
        {"new_value", new_value},
        {"tier", tier},
        {"magnitude", magnitude},
        {"seed", seed},
    };
}

MutationRecord MutationRecord::from_json(const nlohmann::json& j) {
    MutationRecord r;
    r.operator_name = j.at("operator").get<std::string>();
    r.mechanism = j.at("mechanism").get<std::string>();
    r.selector = j.at("selector").get<std::string>();
    r.property = j.at("property").get<std::string>();
    r.old_value = j.at("old_value").get<std::string>();
    r.new_value = j.at("new_value").get<std::string>();
    r.tier = j.at("tier").get<std::string>();
    r.magnitude = j.at("magnitude").get<double>();
    r.seed = j.at("seed").get<uint64_t>();
    return r;
}

std::vector<TargetRef> enumerate_targets(const html::Document& doc, const Operator& op,
                                         const ClassScales& scales) {
    std::vector<TargetRef> out;
    for (const html::Node* el : doc.elements) {
        if (is_excluded_tag(el->tag)) continue;
        bool applicable = false;
        switch (op.kind) {
            case OperatorKind::step_based: {
                const html::Attr* cls = el->find_attr("class");
                if (!cls || !cls->has_value) break;
                for (const auto& tok : tokenize_with_offsets(cls->value)) {
                    if (has_variant_prefix(tok.text)) continue;
                    if (scales.find_token(op.name, tok.text)) {
                        applicable = true;
                        break;
                    }
                }
                break;
            }
            case OperatorKind::continuous:
            case OperatorKind::text_substitution: {
                for (const auto* t : own_text_nodes(el)) {
                    if (!substitutable_positions(t->text).empty()) {
                        applicable = true;
                        break;
                    }
                }
                break;
            }
        }
        if (applicable) out.push_back({el, html::nth_child_path(el)});
    }
    return out;
}

MutateOutcome apply_class_swap(const std::string& html_source,
                               const std::string& selector, const Operator& op,
                               Tier tier, uint64_t seed, const ClassScales& scales) {
    return class_swap_impl(html_source, selector, op, tier, seed, scales, std::nullopt);
}

MutateOutcome apply_inline_override(const std::string& html_source,
                                    const std::string& selector, const Operator& op,
                                    Tier tier, uint64_t seed) {
    MutateOutcome out;
    if (op.kind != OperatorKind::continuous) {
        throw Error(ErrorCode::invalid,
                    "inline override only applies to continuous operators");
    }
    const std::string property =
        op.name == "letter_spacing" ? "letter-spacing" : "line-height";

    const auto doc = html::parse(html_source);
    const auto els = html::select_all(doc, selector);
    if (els.empty()) return out;
    const html::Node* el = els.front();

    const html::Attr* style = el->find_attr("style");
    if (style && style->has_value &&
        style_declares_important(style->value, property)) {
        return out;  // conflicting !important already present
    }

    const TierParams params = tier_params(op, tier);
    Rng rng(seed);
    const double sign = rng.coin() ? 1.0 : -1.0;
    // letter-spacing takes the offset directly; line-height is an absolute
    // value, so the offset is applied around the 1.2em normal baseline
    // (a bare negative length would be invalid CSS there).
    const std::string value = op.name == "letter_spacing"
                                  ? fmt_em(sign * params.em_magnitude)
                                  : fmt_em(1.2 + sign * params.em_magnitude);
    const std::string decl = property + ": " + value + " !important";

    std::string mutated;
    if (style && style->has_value && !trim_view(style->value).empty()) {
        // A value with a trailing ';' takes the declaration bare; one without
        // takes "; " first. The two joins produce distinct byte shapes, so
        // revert_mutation can strip the suffix without guessing.
        const std::string_view existing = trim_view(style->value);
        const std::string sep = existing.back() == ';' ? "" : "; ";
        const size_t at = style->value_span.end;
        mutated = html_source.substr(0, at) + sep + decl + html_source.substr(at);
    } else if (style) {
        // Bare or empty style attribute: appending here would be
        // indistinguishable from an injected attribute when reverting. Rare
        // degenerate markup; skip the element.
        return out;
    } else {
        size_t at = el->start_tag_gt;
        if (el->self_closing) {
            size_t p = at;
            while (p > 0 && std::isspace(static_cast<unsigned char>(html_source[p - 1])))
                --p;
            if (p > 0 && html_source[p - 1] == '/') at = p - 1;
        }
        mutated = html_source.substr(0, at) + " style=\"" + decl + "\"" +
                  html_source.substr(at);
    }

    out.status = MutateStatus::ok;
    out.html = std::move(mutated);
    out.record.operator_name = op.name;
    out.record.mechanism = "inline_override";
    out.record.selector = selector;
    out.record.property = property;
    out.record.old_value = "normal";
    out.record.new_value = value;
    out.record.tier = tier_name(tier);
    out.record.magnitude = params.em_magnitude;
    out.record.seed = seed;

    verify_single_edit(html_source, out.html, false,
                       op.name + " inline_override " + selector);
    return out;
}

MutateOutcome apply_text_edit(const std::string& html_source,
                              const std::string& selector, Tier tier, uint64_t seed) {
    MutateOutcome out;
    const Operator* op = find_operator("text");
    const auto doc = html::parse(html_source);
    const auto els = html::select_all(doc, selector);
    if (els.empty()) return out;
    const html::Node* el = els.front();

    // Edit a single text node (the one with the most substitutable
    // characters) so the change stays a single tree edit.
    const html::Node* best = nullptr;
    std::vector<size_t> positions;
    for (const auto* t : own_text_nodes(el)) {
        auto p = substitutable_positions(t->text);
        if (p.size() > positions.size()) {
            best = t;
            positions = std::move(p);
        }
    }
    if (!best || positions.empty()) return out;  // not_applicable

    const TierParams params = tier_params(*op, tier);
    const int avail = int(positions.size());
    if (avail < params.char_min) {
        out.status = MutateStatus::no_valid_step;
        return out;
    }
    // Easy is "5 or more"; cap draws at 9 to keep the edit atomic.
    const int hi = params.char_max < 0 ? std::min(avail, 9)
                                       : std::min(avail, params.char_max);

    Rng rng(seed);
    const int count = int(rng.range(params.char_min, hi));
    const auto chosen = rng.sample_indices(positions.size(), size_t(count));

    const std::string old_own_text = own_text_of(el);
    std::string mutated = html_source;
    for (size_t c : chosen) {
        const size_t abs = best->text_span.begin + positions[c];
        mutated[abs] = substitute_char(mutated[abs], rng);
    }

    // Re-read the element's text from the mutated document for the record.
    const auto doc2 = html::parse(mutated);
    const auto els2 = html::select_all(doc2, selector);
    const std::string new_own_text = els2.empty() ? "" : own_text_of(els2.front());

    out.status = MutateStatus::ok;
    out.html = std::move(mutated);
    out.record.operator_name = "text";
    out.record.mechanism = "text_edit";
    out.record.selector = selector;
    out.record.property = "text";
    out.record.old_value = old_own_text.substr(0, kTextPrefixLen);
    out.record.new_value = new_own_text.substr(0, kTextPrefixLen);
    out.record.tier = tier_name(tier);
    out.record.magnitude = count;
    out.record.seed = seed;

    verify_single_edit(html_source, out.html, true, "text text_edit " + selector);
    return out;
}

GroupResult mutate_grouped(const std::string& html_source, const Operator& op,
                           uint64_t seed, const ClassScales& scales) {
    GroupResult res;
    const auto doc = html::parse(html_source);
    const auto targets = enumerate_targets(doc, op, scales);
    if (targets.empty()) return res;  // not_applicable

    Rng base(seed);
    std::vector<size_t> order(targets.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    {
        Rng shuffle_rng = base.derive("target-order");
        shuffle_rng.shuffle(order);
    }

    bool saw_no_valid_step = false;
    for (const size_t ti : order) {
        const TargetRef& target = targets[ti];
        std::vector<MutationCandidate> candidates;
        std::vector<std::string> omitted;
        bool target_applicable = true;

        if (op.kind == OperatorKind::step_based) {
            // Fix one swappable class occurrence so all tiers move the same
            // token along the same axis.
            const html::Attr* cls = target.element->find_attr("class");
            const auto tokens = tokenize_with_offsets(cls ? cls->value : "");
            std::vector<size_t> applicable;
            for (size_t k = 0; k < tokens.size(); ++k) {
                if (has_variant_prefix(tokens[k].text)) continue;
                if (scales.find_token(op.name, tokens[k].text)) applicable.push_back(k);
            }
            if (applicable.empty()) continue;
            Rng occ_rng = base.derive("occ/" + target.selector);
            const size_t occ = applicable[occ_rng.bounded(applicable.size())];

            for (Tier tier : kAllTiers) {
                const uint64_t tier_seed =
                    subseed(seed, target.selector + "/" + tier_name(tier));
                auto outcome = class_swap_impl(html_source, target.selector, op, tier,
                                               tier_seed, scales, occ);
                if (outcome.status == MutateStatus::ok) {
                    candidates.push_back({outcome.record.tier, std::move(outcome.html),
                                          std::move(outcome.record)});
                } else {
                    omitted.push_back(tier_name(tier));
                }
            }
        } else if (op.kind == OperatorKind::continuous) {
            for (Tier tier : kAllTiers) {
                const uint64_t tier_seed =
                    subseed(seed, target.selector + "/" + tier_name(tier));
                auto outcome =
                    apply_inline_override(html_source, target.selector, op, tier, tier_seed);
                if (outcome.status == MutateStatus::ok) {
                    candidates.push_back({outcome.record.tier, std::move(outcome.html),
                                          std::move(outcome.record)});
                } else {
                    // Conflicting !important declarations block every tier.
                    target_applicable = false;
                    break;
                }
            }
        } else {
            for (Tier tier : kAllTiers) {
                const uint64_t tier_seed =
                    subseed(seed, target.selector + "/" + tier_name(tier));
                auto outcome =
                    apply_text_edit(html_source, target.selector, tier, tier_seed);
                if (outcome.status == MutateStatus::ok) {
                    candidates.push_back({outcome.record.tier, std::move(outcome.html),
                                          std::move(outcome.record)});
                } else if (outcome.status == MutateStatus::no_valid_step) {
                    omitted.push_back(tier_name(tier));
                } else {
                    target_applicable = false;
                    break;
                }
            }
        }

        if (!target_applicable) continue;
        if (!candidates.empty()) {
            res.status = MutateStatus::ok;
            res.selector = target.selector;
            res.candidates = std::move(candidates);
            res.omitted_tiers = std::move(omitted);
            return res;
        }
        saw_no_valid_step = true;
    }

    res.status = saw_no_valid_step ? MutateStatus::no_valid_step
                                   : MutateStatus::not_applicable;
    return res;
}

std::string revert_mutation(const std::string& mutated_html,
                            const MutationRecord& record) {
    const auto doc = html::parse(mutated_html);
    const auto els = html::select_all(doc, record.selector);
    if (els.empty()) {
        throw Error(ErrorCode::invalid,
                    "revert: selector no longer resolves: " + record.selector);
    }
    const html::Node* el = els.front();

    if (record.mechanism == "class_swap") {
        const html::Attr* cls = el->find_attr("class");
        if (!cls) throw Error(ErrorCode::invalid, "revert: class attribute missing");
        for (const auto& tok : tokenize_with_offsets(cls->value)) {
            if (tok.text == record.new_value) {
                const size_t abs = cls->value_span.begin + tok.offset;
                return mutated_html.substr(0, abs) + record.old_value +
                       mutated_html.substr(abs + record.new_value.size());
            }
        }
        throw Error(ErrorCode::invalid, "revert: swapped class not found");
    }

    if (record.mechanism == "inline_override") {
        const html::Attr* style = el->find_attr("style");
        if (!style) throw Error(ErrorCode::invalid, "revert: style attribute missing");
        const std::string decl =
            record.property + ": " + record.new_value + " !important";
        const std::string& v = style->value;
        if (v == decl) {
            // The whole attribute was injected as ` style="decl"`.
            const std::string expected = " style=\"";
            const size_t attr_begin = style->value_span.begin - expected.size();
            if (mutated_html.compare(attr_begin, expected.size(), expected) != 0 ||
                mutated_html[style->value_span.end] != '"') {
                throw Error(ErrorCode::invalid, "revert: unexpected style attr shape");
            }
            return mutated_html.substr(0, attr_begin) +
                   mutated_html.substr(style->value_span.end + 1);
        }
        // Declaration appended to an existing attribute: strip the suffix.
        // Longer separator first so "x; decl" is not misread as "x;"+decl.
        for (const std::string& sep : {std::string("; "), std::string()}) {
            const std::string suffix = sep + decl;
            if (v.size() > suffix.size() &&
                v.compare(v.size() - suffix.size(), suffix.size(), suffix) == 0) {
                const size_t cut = style->value_span.end - suffix.size();
                return mutated_html.substr(0, cut) +
                       mutated_html.substr(style->value_span.end);
            }
        }
        throw Error(ErrorCode::invalid, "revert: injected declaration not found");
    }

    if (record.mechanism == "text_edit") {
        // Lengths are preserved by substitution; overwrite the element's own
        // text with the stored prefix.
        std::string out = mutated_html;
        size_t restored = 0;
        for (const auto& c : el->children) {
            if (!c->is_text()) continue;
            for (size_t i = 0; i < c->text.size() && restored < record.old_value.size();
                 ++i, ++restored) {
                out[c->text_span.begin + i] = record.old_value[restored];
            }
        }
        return out;
    }

    throw Error(ErrorCode::invalid, "revert: unknown mechanism " + record.mechanism);
}

}  // namespace diffspot::mutate
