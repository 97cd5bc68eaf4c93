#include "mutate/tree_diff.hpp"

#include "html/selector.hpp"

namespace diffspot::mutate {

namespace {

void walk(const html::Node* a, const html::Node* b, TreeDiff& out) {
    if (!out.structure_equal) return;
    if (a->kind != b->kind || a->tag != b->tag ||
        a->children.size() != b->children.size()) {
        out.structure_equal = false;
        return;
    }

    if (a->is_element()) {
        // Attributes compared positionally: a single-edit mutation rewrites a
        // value in place and never reorders, adds or removes other attributes.
        if (a->attrs.size() != b->attrs.size()) {
            out.attr_changes.push_back(html::nth_child_path(a) + " @<count>");
        } else {
            for (size_t i = 0; i < a->attrs.size(); ++i) {
                const auto& aa = a->attrs[i];
                const auto& bb = b->attrs[i];
                if (aa.name != bb.name) {
                    out.attr_changes.push_back(html::nth_child_path(a) + " @<names>");
                } else if (aa.value != bb.value || aa.has_value != bb.has_value) {
                    out.attr_changes.push_back(html::nth_child_path(a) + " @" + aa.name);
                }
            }
        }
        // A style attribute added by a mutation shows as an attr-count change
        // on exactly one element; fold it into a single entry.
    }

    size_t text_index = 0;
    for (size_t i = 0; i < a->children.size(); ++i) {
        const html::Node* ca = a->children[i].get();
        const html::Node* cb = b->children[i].get();
        if (ca->is_text() && cb->is_text()) {
            if (ca->text != cb->text) {
                const std::string base =
                    a->is_element() ? html::nth_child_path(a) : std::string("<root>");
                out.text_changes.push_back(base + " #text[" +
                                           std::to_string(text_index) + "]");
            }
            ++text_index;
            continue;
        }
        walk(ca, cb, out);
        if (!out.structure_equal) return;
    }
}

}  // namespace

TreeDiff tree_diff(const html::Document& a, const html::Document& b) {
    TreeDiff out;
    walk(a.root.get(), b.root.get(), out);
    return out;
}

}  // namespace diffspot::mutate
