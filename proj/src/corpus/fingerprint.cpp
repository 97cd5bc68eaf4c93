#include "corpus/fingerprint.hpp"

#include "core/hash.hpp"

namespace diffspot::corpus {

namespace {

void feed(const html::Node* n, uint64_t& h) {
    for (const auto& c : n->children) {
        if (!c->is_element()) continue;
        h = fnv1a64("<", h);
        h = fnv1a64(c->tag, h);
        feed(c.get(), h);
        h = fnv1a64(">", h);
    }
}

}  // namespace

std::string structure_fingerprint(const html::Document& doc) {
    uint64_t h = kFnvOffset;
    feed(doc.root.get(), h);
    return hex64(h);
}

std::string structure_fingerprint(std::string_view html_source) {
    return structure_fingerprint(html::parse(html_source));
}

}  // namespace diffspot::corpus
