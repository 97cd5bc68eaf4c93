#pragma once

#include <string>

#include "corpus/types.hpp"
#include "net/http_client.hpp"

namespace diffspot::corpus {

struct LabelResult {
    std::string domain;
    std::string style;
    bool invalid = false;     // out-of-list label twice in a row
    bool unresolved = false;  // transport failure; retry the page later
};

// Asks a chat-style LLM endpoint to classify a page into one configured
// domain category and one style category. Out-of-list responses get one
// retry; a second miss marks the page label_invalid.
class PageLabeler {
public:
    PageLabeler(net::JsonHttpClient* client, std::string path, std::string model,
                LabelConfig config);

    LabelResult label(const PageSource& page) const;

    // Exposed for tests: the exact prompt sent for a page.
    std::string build_prompt(const PageSource& page) const;

private:
    LabelResult parse_reply(const std::string& reply) const;

    net::JsonHttpClient* client_;
    std::string path_;
    std::string model_;
    LabelConfig config_;
};

// The paper's category lists are configuration, not constants; these defaults
// are the toolkit's own and can be replaced wholesale via config.
LabelConfig default_label_config();

}  // namespace diffspot::corpus
