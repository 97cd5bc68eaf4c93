#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/types.hpp"
#include "net/http_client.hpp"

namespace diffspot::corpus {

// Client for an opaque image-embedding endpoint: base64 PNG in, float vector
// out. The model behind the endpoint is not pinned; the only contract is a
// fixed-dimension, unit-normalizable vector per image.
class EmbeddingClient {
public:
    EmbeddingClient(net::JsonHttpClient* client, std::string path, std::string model);

    std::vector<double> embed_image(const std::vector<uint8_t>& png_bytes) const;

private:
    net::JsonHttpClient* client_;
    std::string path_;
    std::string model_;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// passed ⇔ cosine ≥ threshold (boundary inclusive).
EmbeddingGateResult embedding_gate(const std::vector<uint8_t>& image_a,
                                   const std::vector<uint8_t>& image_b,
                                   const EmbeddingClient& client,
                                   double threshold = 0.70);

}  // namespace diffspot::corpus
