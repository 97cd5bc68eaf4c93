#pragma once

#include <string>
#include <vector>

#include "html/dom.hpp"

namespace diffspot::mutate {

// Structural comparison of two parsed documents. Used to enforce the
// single-edit property: a mutation may change exactly one attribute of one
// element, or exactly one text node — nothing else.
struct TreeDiff {
    bool structure_equal = true;          // same shape: kinds, tags, child counts
    std::vector<std::string> attr_changes;  // "<path> @<attr>"
    std::vector<std::string> text_changes;  // "<path> #text[k]"

    bool identical() const {
        return structure_equal && attr_changes.empty() && text_changes.empty();
    }
    bool single_attribute_edit() const {
        return structure_equal && attr_changes.size() == 1 && text_changes.empty();
    }
    bool single_text_edit() const {
        return structure_equal && attr_changes.empty() && text_changes.size() == 1;
    }
};

TreeDiff tree_diff(const html::Document& a, const html::Document& b);

}  // namespace diffspot::mutate
