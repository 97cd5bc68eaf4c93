#include "html/selector.hpp"

#include <algorithm>
#include <cctype>

#include "core/error.hpp"
#include "core/strings.hpp"

namespace diffspot::html {

namespace {

class SelectorParser {
public:
    explicit SelectorParser(std::string_view text) : text_(text) {}

    Selector run() {
        Selector out;
        skip_ws();
        out.compounds.push_back(parse_compound());
        for (;;) {
            bool saw_ws = skip_ws();
            if (pos_ >= text_.size()) break;
            if (text_[pos_] == '>') {
                ++pos_;
                skip_ws();
                out.combinators.push_back(Combinator::child);
            } else if (saw_ws) {
                out.combinators.push_back(Combinator::descendant);
            } else {
                fail("unexpected character");
            }
            out.compounds.push_back(parse_compound());
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw Error(ErrorCode::invalid,
                    "selector syntax error at offset " + std::to_string(pos_) + ": " + why +
                        " in \"" + std::string(text_) + "\"");
    }

    bool skip_ws() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return pos_ > start;
    }

    std::string read_ident() {
        size_t b = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            unsigned char u = static_cast<unsigned char>(c);
            if (std::isalnum(u) || c == '-' || c == '_')
                ++pos_;
            else
                break;
        }
        if (pos_ == b) fail("expected identifier");
        return to_lower(text_.substr(b, pos_ - b));
    }

    SimpleSelector parse_compound() {
        SimpleSelector sel;
        bool any = false;
        if (pos_ < text_.size() && text_[pos_] == '*') {
            ++pos_;
            any = true;
        } else if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
            sel.tag = read_ident();
            any = true;
        }
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                ++pos_;
                sel.id = read_raw_ident();
            } else if (c == '.') {
                ++pos_;
                sel.classes.push_back(read_raw_ident());
            } else if (c == '[') {
                ++pos_;
                parse_attr_test(sel);
            } else if (c == ':') {
                ++pos_;
                parse_pseudo(sel);
            } else {
                break;
            }
            any = true;
        }
        if (!any) fail("empty compound selector");
        return sel;
    }

    // ids/classes keep their case; only tags and attr names fold.
    std::string read_raw_ident() {
        size_t b = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            unsigned char u = static_cast<unsigned char>(c);
            if (std::isalnum(u) || c == '-' || c == '_')
                ++pos_;
            else
                break;
        }
        if (pos_ == b) fail("expected identifier");
        return std::string(text_.substr(b, pos_ - b));
    }

    void parse_attr_test(SimpleSelector& sel) {
        skip_ws();
        std::string name = read_ident();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            sel.attr_tests.emplace_back(name, std::nullopt);
            return;
        }
        if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected ']' or '='");
        ++pos_;
        skip_ws();
        std::string value;
        if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'')) {
            char quote = text_[pos_++];
            size_t end = text_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated quoted value");
            value = std::string(text_.substr(pos_, end - pos_));
            pos_ = end + 1;
        } else {
            size_t b = pos_;
            while (pos_ < text_.size() && text_[pos_] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            value = std::string(text_.substr(b, pos_ - b));
        }
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ']') fail("expected ']'");
        ++pos_;
        sel.attr_tests.emplace_back(name, value);
    }

    void parse_pseudo(SimpleSelector& sel) {
        std::string name = read_ident();
        if (name != "nth-child") fail("unsupported pseudo-class :" + name);
        if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
        ++pos_;
        skip_ws();
        size_t b = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == b) fail("nth-child wants an integer");
        int n = std::stoi(std::string(text_.substr(b, pos_ - b)));
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
        ++pos_;
        if (n < 1) fail("nth-child index must be >= 1");
        sel.nth_child = n;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

}  // namespace

Selector parse_selector(std::string_view text) {
    if (trim_view(text).empty())
        throw Error(ErrorCode::invalid, "empty selector");
    return SelectorParser(trim_view(text)).run();
}

bool matches_compound(const Node* element, const SimpleSelector& sel) {
    if (!element || !element->is_element()) return false;
    if (!sel.tag.empty() && element->tag != sel.tag) return false;
    if (!sel.id.empty() && element->attr_value("id") != sel.id) return false;
    if (!sel.classes.empty()) {
        auto tokens = element->class_tokens();
        for (const auto& cls : sel.classes) {
            if (std::find(tokens.begin(), tokens.end(), cls) == tokens.end()) return false;
        }
    }
    for (const auto& [name, value] : sel.attr_tests) {
        const Attr* a = element->find_attr(name);
        if (!a) return false;
        if (value && a->value != *value) return false;
    }
    if (sel.nth_child > 0 && element->nth_child_index() != sel.nth_child) return false;
    return true;
}

namespace {

// True when `element` matches the selector suffix ending at compound `idx`.
bool matches_upward(const Node* element, const Selector& sel, size_t idx) {
    if (!matches_compound(element, sel.compounds[idx])) return false;
    if (idx == 0) return true;
    Combinator comb = sel.combinators[idx - 1];
    const Node* parent = element->parent;
    if (comb == Combinator::child) {
        return parent && parent->is_element() && matches_upward(parent, sel, idx - 1);
    }
    for (const Node* anc = parent; anc && anc->is_element(); anc = anc->parent) {
        if (matches_upward(anc, sel, idx - 1)) return true;
    }
    return false;
}

}  // namespace

std::vector<Node*> select_all(const Document& doc, const Selector& sel) {
    std::vector<Node*> out;
    for (Node* e : doc.elements) {
        if (matches_upward(e, sel, sel.compounds.size() - 1)) out.push_back(e);
    }
    return out;
}

std::vector<Node*> select_all(const Document& doc, std::string_view selector_text) {
    return select_all(doc, parse_selector(selector_text));
}

std::string nth_child_path(const Node* element) {
    std::vector<std::string> parts;
    for (const Node* n = element; n && n->is_element(); n = n->parent) {
        bool at_root = !n->parent || !n->parent->is_element();
        if (at_root) {
            parts.push_back(n->tag);
        } else {
            parts.push_back(n->tag + ":nth-child(" + std::to_string(n->nth_child_index()) + ")");
        }
    }
    std::reverse(parts.begin(), parts.end());
    return join(parts, " > ");
}

}  // namespace diffspot::html
