#pragma once

#include <optional>
#include <string>
#include <vector>

#include "html/dom.hpp"

namespace diffspot::html {

// Supported selector grammar, enough for generated nth-child paths plus the
// usual hand-written queries:
//   compound:   tag? ( '#'id | '.'class | '[attr]' | '[attr=value]' |
//                      ':nth-child(' N ')' )*
//   complex:    compound ( ( '>' | ' ' ) compound )*
struct SimpleSelector {
    std::string tag;  // empty = universal
    std::string id;
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, std::optional<std::string>>> attr_tests;
    int nth_child = 0;  // 0 = unset
};

enum class Combinator { descendant, child };

struct Selector {
    std::vector<SimpleSelector> compounds;
    std::vector<Combinator> combinators;  // size = compounds.size() - 1
};

// Throws Error(ErrorCode::invalid) on syntax errors.
Selector parse_selector(std::string_view text);

bool matches_compound(const Node* element, const SimpleSelector& sel);

// All matching elements in document order.
std::vector<Node*> select_all(const Document& doc, const Selector& sel);
std::vector<Node*> select_all(const Document& doc, std::string_view selector_text);

// Structural selector for an element: tag:nth-child(k) components joined by
// " > " from the root element down, e.g. "html > body > div:nth-child(2)".
std::string nth_child_path(const Node* element);

}  // namespace diffspot::html
