#pragma once

#include <string>
#include <string_view>

#include "html/dom.hpp"

namespace diffspot::corpus {

// Structure fingerprint: 64-bit hash of the element-tag tree in depth-first
// order, with open/close delimiters so sibling and nesting arrangements hash
// differently. Text content and attribute values never contribute.
std::string structure_fingerprint(const html::Document& doc);
std::string structure_fingerprint(std::string_view html_source);

}  // namespace diffspot::corpus
