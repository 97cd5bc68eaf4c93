#include <array>
#include <cctype>

#include "core/strings.hpp"
#include "html/dom.hpp"

namespace diffspot::html {

const Attr* Node::find_attr(std::string_view name) const {
    for (const auto& a : attrs)
        if (a.name == name) return &a;
    return nullptr;
}

std::string Node::attr_value(std::string_view name) const {
    const Attr* a = find_attr(name);
    return a ? a->value : std::string();
}

std::vector<std::string> Node::class_tokens() const {
    return split_ws(attr_value("class"));
}

std::vector<Node*> Node::element_children() const {
    std::vector<Node*> out;
    for (const auto& c : children)
        if (c->is_element()) out.push_back(c.get());
    return out;
}

int Node::nth_child_index() const {
    if (!parent) return 1;
    int idx = 0;
    for (const auto& c : parent->children) {
        if (c->is_element()) {
            ++idx;
            if (c.get() == this) return idx;
        }
    }
    return 1;
}

std::string Node::own_text() const {
    std::string out;
    for (const auto& c : children)
        if (c->is_text()) out += c->text;
    return out;
}

std::string Node::text_content() const {
    std::string out;
    for (const auto& c : children) {
        if (c->is_text())
            out += c->text;
        else if (c->is_element())
            out += c->text_content();
    }
    return out;
}

Node* Document::root_element() const {
    if (!root) return nullptr;
    for (const auto& c : root->children)
        if (c->is_element()) return c.get();
    return nullptr;
}

bool is_void_element(std::string_view tag) {
    static const std::array<std::string_view, 14> kVoid = {
        "area", "base", "br",    "col",  "embed",  "hr",    "img",
        "input", "link", "meta", "param", "source", "track", "wbr"};
    for (auto v : kVoid)
        if (v == tag) return true;
    return false;
}

namespace {

bool is_raw_text_element(std::string_view tag) {
    return tag == "script" || tag == "style" || tag == "textarea" || tag == "title";
}

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_name_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '-' || c == '_' || c == ':';
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Document run() {
        Document doc;
        doc.source = std::string(src_);
        doc.root = std::make_unique<Node>();
        doc.root->kind = Node::Kind::document;
        stack_.push_back(doc.root.get());

        size_t text_begin = 0;
        while (pos_ < src_.size()) {
            if (src_[pos_] != '<') {
                ++pos_;
                continue;
            }
            // A '<' not starting any markup construct stays literal text.
            if (!markup_follows()) {
                ++pos_;
                continue;
            }
            flush_text(text_begin, pos_);
            consume_markup();
            text_begin = pos_;
        }
        flush_text(text_begin, src_.size());

        index_elements(doc.root.get(), doc.elements);
        return doc;
    }

private:
    bool markup_follows() const {
        if (pos_ + 1 >= src_.size()) return false;
        char c = src_[pos_ + 1];
        return is_name_start(c) || c == '/' || c == '!' || c == '?';
    }

    void flush_text(size_t begin, size_t end) {
        if (end <= begin) return;
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::text;
        node->text = std::string(src_.substr(begin, end - begin));
        node->text_span = {begin, end};
        node->parent = stack_.back();
        stack_.back()->children.push_back(std::move(node));
    }

    void consume_markup() {
        char c = src_[pos_ + 1];
        if (c == '!') {
            if (src_.substr(pos_, 4) == "<!--") {
                size_t end = src_.find("-->", pos_ + 4);
                pos_ = (end == std::string_view::npos) ? src_.size() : end + 3;
            } else {
                skip_to_gt();
            }
        } else if (c == '?') {
            skip_to_gt();
        } else if (c == '/') {
            consume_close_tag();
        } else {
            consume_open_tag();
        }
    }

    void skip_to_gt() {
        size_t end = src_.find('>', pos_);
        pos_ = (end == std::string_view::npos) ? src_.size() : end + 1;
    }

    void consume_close_tag() {
        size_t p = pos_ + 2;
        size_t name_begin = p;
        while (p < src_.size() && is_name_char(src_[p])) ++p;
        std::string name = to_lower(src_.substr(name_begin, p - name_begin));
        size_t end = src_.find('>', p);
        pos_ = (end == std::string_view::npos) ? src_.size() : end + 1;

        // Pop to the matching open element if one exists; otherwise ignore.
        for (size_t i = stack_.size(); i > 1; --i) {
            if (stack_[i - 1]->tag == name) {
                stack_.resize(i - 1);
                return;
            }
        }
    }

    void consume_open_tag() {
        size_t p = pos_ + 1;
        size_t name_begin = p;
        while (p < src_.size() && is_name_char(src_[p])) ++p;
        std::string name = to_lower(src_.substr(name_begin, p - name_begin));

        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::element;
        node->tag = name;

        bool self_closed = false;
        while (p < src_.size()) {
            while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
            if (p >= src_.size()) break;
            if (src_[p] == '>') break;
            if (src_[p] == '/') {
                if (p + 1 < src_.size() && src_[p + 1] == '>') {
                    self_closed = true;
                    ++p;
                    break;
                }
                ++p;
                continue;
            }
            parse_attr(*node, p);
        }
        node->start_tag_gt = (p < src_.size()) ? p : src_.size();
        pos_ = (p < src_.size()) ? p + 1 : src_.size();
        node->self_closing = self_closed;

        Node* raw = node.get();
        raw->parent = stack_.back();
        stack_.back()->children.push_back(std::move(node));

        if (self_closed || is_void_element(name)) return;

        if (is_raw_text_element(name)) {
            consume_raw_text(raw, name);
            return;
        }
        stack_.push_back(raw);
    }

    void parse_attr(Node& node, size_t& p) {
        size_t name_begin = p;
        while (p < src_.size() && src_[p] != '=' && src_[p] != '>' && src_[p] != '/' &&
               !std::isspace(static_cast<unsigned char>(src_[p])))
            ++p;
        if (p == name_begin) {  // stray character; skip it
            ++p;
            return;
        }
        Attr attr;
        attr.name = to_lower(src_.substr(name_begin, p - name_begin));

        size_t q = p;
        while (q < src_.size() && std::isspace(static_cast<unsigned char>(src_[q]))) ++q;
        if (q < src_.size() && src_[q] == '=') {
            ++q;
            while (q < src_.size() && std::isspace(static_cast<unsigned char>(src_[q]))) ++q;
            size_t vb, ve;
            if (q < src_.size() && (src_[q] == '"' || src_[q] == '\'')) {
                char quote = src_[q];
                vb = q + 1;
                ve = src_.find(quote, vb);
                if (ve == std::string_view::npos) ve = src_.size();
                p = (ve < src_.size()) ? ve + 1 : src_.size();
            } else {
                vb = q;
                ve = q;
                while (ve < src_.size() && src_[ve] != '>' &&
                       !std::isspace(static_cast<unsigned char>(src_[ve])))
                    ++ve;
                p = ve;
            }
            attr.has_value = true;
            attr.value = std::string(src_.substr(vb, ve - vb));
            attr.value_span = {vb, ve};
        }

        // First occurrence wins, as in browsers.
        if (!node.find_attr(attr.name)) node.attrs.push_back(std::move(attr));
    }

    void consume_raw_text(Node* element, const std::string& name) {
        size_t content_begin = pos_;
        std::string close = "</" + name;
        size_t p = pos_;
        size_t content_end = src_.size();
        size_t resume = src_.size();
        while (p < src_.size()) {
            size_t hit = src_.find('<', p);
            if (hit == std::string_view::npos) break;
            if (to_lower(src_.substr(hit, close.size())) == close) {
                content_end = hit;
                size_t gt = src_.find('>', hit);
                resume = (gt == std::string_view::npos) ? src_.size() : gt + 1;
                break;
            }
            p = hit + 1;
        }
        if (content_end > content_begin) {
            auto tn = std::make_unique<Node>();
            tn->kind = Node::Kind::text;
            tn->text = std::string(src_.substr(content_begin, content_end - content_begin));
            tn->text_span = {content_begin, content_end};
            tn->parent = element;
            element->children.push_back(std::move(tn));
        }
        pos_ = resume;
    }

    static void index_elements(Node* n, std::vector<Node*>& out) {
        for (const auto& c : n->children) {
            if (c->is_element()) {
                out.push_back(c.get());
                index_elements(c.get(), out);
            }
        }
    }

    std::string_view src_;
    size_t pos_ = 0;
    std::vector<Node*> stack_;
};

}  // namespace

Document parse(std::string_view source) { return Parser(source).run(); }

}  // namespace diffspot::html
