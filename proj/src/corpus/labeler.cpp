#include "corpus/labeler.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "core/strings.hpp"

namespace diffspot::corpus {

namespace {

constexpr size_t kMaxHtmlBytesInPrompt = 6000;
constexpr double kLabelTemperature = 0.3;

bool in_list(const std::vector<std::string>& list, const std::string& value) {
    return std::find(list.begin(), list.end(), value) != list.end();
}

}  // namespace

LabelConfig default_label_config() {
    LabelConfig config;
    config.domain_categories = {
        "news",      "blog",       "e-commerce", "portfolio",  "documentation",
        "landing",   "dashboard",  "forum",      "education",  "government",
        "healthcare", "finance",   "travel",     "restaurant", "nonprofit",
    };
    config.style_categories = {"minimal", "corporate", "playful", "editorial"};
    return config;
}

PageLabeler::PageLabeler(net::JsonHttpClient* client, std::string path,
                         std::string model, LabelConfig config)
    : client_(client), path_(std::move(path)), model_(std::move(model)),
      config_(std::move(config)) {}

std::string PageLabeler::build_prompt(const PageSource& page) const {
    std::string prompt =
        "Classify the web page below into exactly one domain category and one "
        "visual-style category.\n\nDomain categories: " +
        join(config_.domain_categories, ", ") +
        "\nStyle categories: " + join(config_.style_categories, ", ") +
        "\n\nReply with a single line of the form:\n<domain> | <style>\n\nHTML:\n";
    prompt.append(page.html, 0, std::min(page.html.size(), kMaxHtmlBytesInPrompt));
    return prompt;
}

LabelResult PageLabeler::parse_reply(const std::string& reply) const {
    LabelResult result;
    const auto bar = reply.find('|');
    if (bar == std::string::npos) {
        result.invalid = true;
        return result;
    }
    result.domain = trim(reply.substr(0, bar));
    result.style = trim(reply.substr(bar + 1));
    // Tolerate a trailing sentence on the style side: keep the first line only.
    if (const auto nl = result.style.find('\n'); nl != std::string::npos) {
        result.style = trim(result.style.substr(0, nl));
    }
    result.invalid = !in_list(config_.domain_categories, result.domain) ||
                     !in_list(config_.style_categories, result.style);
    return result;
}

LabelResult PageLabeler::label(const PageSource& page) const {
    const nlohmann::json request = {
        {"model", model_},
        {"temperature", kLabelTemperature},
        {"messages",
         nlohmann::json::array(
             {{{"role", "user"}, {"content", build_prompt(page)}}})},
    };

    LabelResult result;
    for (int attempt = 0; attempt < 2; ++attempt) {
        nlohmann::json reply;
        try {
            reply = client_->post_json(path_, request);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::transport) {
                result = LabelResult{};
                result.unresolved = true;
                return result;
            }
            throw;
        }
        std::string content;
        try {
            content = reply.at("choices").at(0).at("message").at("content")
                          .get<std::string>();
        } catch (const nlohmann::json::exception&) {
            result = LabelResult{};
            result.invalid = true;
            continue;
        }
        result = parse_reply(content);
        if (!result.invalid) return result;
    }
    return result;  // invalid after both attempts
}

}  // namespace diffspot::corpus
