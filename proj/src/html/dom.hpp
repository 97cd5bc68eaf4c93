#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace diffspot::html {

// Byte range into Document::source. Attribute value spans cover the value
// text only (quotes excluded), so mutations can splice the original bytes
// and leave everything else byte-identical.
struct SourceSpan {
    size_t begin = 0;
    size_t end = 0;
    size_t size() const { return end - begin; }
};

struct Attr {
    std::string name;   // lowercased
    std::string value;  // raw source text, entities not decoded
    bool has_value = false;
    SourceSpan value_span{};
};

class Node {
public:
    enum class Kind { document, element, text };

    Kind kind = Kind::document;
    std::string tag;   // lowercased; elements only
    std::string text;  // text nodes only; raw source bytes
    std::vector<Attr> attrs;
    std::vector<std::unique_ptr<Node>> children;
    Node* parent = nullptr;

    SourceSpan text_span{};       // text nodes
    size_t start_tag_gt = 0;      // offset of '>' closing the start tag (elements)
    bool self_closing = false;

    bool is_element() const { return kind == Kind::element; }
    bool is_text() const { return kind == Kind::text; }

    const Attr* find_attr(std::string_view name) const;
    std::string attr_value(std::string_view name) const;
    std::vector<std::string> class_tokens() const;

    std::vector<Node*> element_children() const;
    // 1-based position among the parent's element children (CSS :nth-child).
    int nth_child_index() const;

    // Concatenation of direct text children.
    std::string own_text() const;
    // Concatenation of all descendant text.
    std::string text_content() const;
};

struct Document {
    std::string source;
    std::unique_ptr<Node> root;        // Kind::document
    std::vector<Node*> elements;       // depth-first document order

    Node* root_element() const;        // first element child of root, or nullptr
};

// Error-recovering tag-soup parser: any input yields a tree. Comments,
// doctypes and processing instructions are skipped; script/style/textarea/
// title take raw text content; unknown or mismatched close tags never throw.
Document parse(std::string_view source);

bool is_void_element(std::string_view lowercased_tag);

}  // namespace diffspot::html
