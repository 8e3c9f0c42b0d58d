#pragma once

#include <memory>
#include <string>

#include "reckon/llm.hpp"

namespace reckon::llm {

struct HttpBackendConfig {
    std::string base_url;                       // e.g. "https://api.openai.com/v1"
    std::string api_key_env = "OPENAI_API_KEY"; // credentials come from the environment only
    std::string chat_path = "/chat/completions";
    std::string embeddings_path = "/embeddings";
    int timeout_seconds = 120;
};

/// Chat + embeddings over an OpenAI-compatible wire format. Network errors
/// and 5xx responses raise TransportError (retryable); 4xx raises a
/// non-retryable backend error.
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    ChatResponse chat(const ChatRequest& request) override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                           const std::string& model_id) override;
    std::string id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace reckon::llm
