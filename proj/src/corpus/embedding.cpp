#include "corpus/embedding.hpp"

#include <cmath>

#include "core/base64.hpp"
#include "core/error.hpp"

namespace diffspot::corpus {

EmbeddingClient::EmbeddingClient(net::JsonHttpClient* client, std::string path,
                                 std::string model)
    : client_(client), path_(std::move(path)), model_(std::move(model)) {}

std::vector<double> EmbeddingClient::embed_image(
    const std::vector<uint8_t>& png_bytes) const {
    const nlohmann::json request = {
        {"model", model_},
        {"input", nlohmann::json::array({{{"image", base64_encode(png_bytes)}}})},
    };
    const nlohmann::json reply = client_->post_json(path_, request);

    try {
        const auto& vec = reply.at("data").at(0).at("embedding");
        std::vector<double> out;
        out.reserve(vec.size());
        for (const auto& v : vec) out.push_back(v.get<double>());
        if (out.empty()) {
            throw Error(ErrorCode::transport, "embedding endpoint returned an empty vector");
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::transport,
                    std::string("non-conforming embedding response: ") + e.what());
    }
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::transport, "embedding dimension mismatch: " +
                                              std::to_string(a.size()) + " vs " +
                                              std::to_string(b.size()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorCode::transport, "embedding vector is not unit-normalizable");
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingGateResult embedding_gate(const std::vector<uint8_t>& image_a,
                                   const std::vector<uint8_t>& image_b,
                                   const EmbeddingClient& client, double threshold) {
    EmbeddingGateResult result;
    result.threshold = threshold;
    const auto ea = client.embed_image(image_a);
    const auto eb = client.embed_image(image_b);
    result.similarity = cosine_similarity(ea, eb);
    result.passed = result.similarity >= threshold;
    return result;
}

}  // namespace diffspot::corpus
