#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "reckon/http_backend.hpp"

#include <cstdlib>

#include <json.hpp>

#include "reckon/error.hpp"

namespace reckon::llm {

using nlohmann::json;

struct HttpBackend::Impl {
    HttpBackendConfig config;
    std::string scheme_host_port;
    std::string path_prefix;
    httplib::Client client;

    explicit Impl(HttpBackendConfig cfg)
        : config(std::move(cfg)),
          scheme_host_port(split_origin(config.base_url).first),
          path_prefix(split_origin(config.base_url).second),
          client(scheme_host_port) {
        client.set_connection_timeout(config.timeout_seconds);
        client.set_read_timeout(config.timeout_seconds);
        client.set_write_timeout(config.timeout_seconds);
    }

    // "https://host:port/v1" -> ("https://host:port", "/v1")
    static std::pair<std::string, std::string> split_origin(const std::string& url) {
        auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) {
            throw config_error("http backend base_url must include a scheme: " + url);
        }
        auto path_start = url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            return {url, ""};
        }
        std::string prefix = url.substr(path_start);
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        return {url.substr(0, path_start), prefix};
    }

    httplib::Headers headers() const {
        httplib::Headers h;
        const char* key = std::getenv(config.api_key_env.c_str());
        if (key && *key) {
            h.emplace("Authorization", std::string("Bearer ") + key);
        }
        return h;
    }

    json post(const std::string& path, const json& body) {
        auto res = client.Post(path_prefix + path, headers(), body.dump(), "application/json");
        if (!res) {
            throw TransportError("no response from " + scheme_host_port + path_prefix + path +
                                 ": " + httplib::to_string(res.error()));
        }
        if (res->status >= 500) {
            throw TransportError("HTTP " + std::to_string(res->status) + " from " + path + ": " +
                                 res->body.substr(0, 200));
        }
        if (res->status >= 400) {
            throw backend_error("HTTP " + std::to_string(res->status) + " from " + path + ": " +
                                res->body.substr(0, 200));
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception& e) {
            throw backend_error(std::string("unparseable response body: ") + e.what());
        }
    }
};

HttpBackend::HttpBackend(HttpBackendConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::id() const { return "http:" + impl_->scheme_host_port; }

ChatResponse HttpBackend::chat(const ChatRequest& request) {
    json messages = json::array();
    if (request.system_text) {
        messages.push_back({{"role", "system"}, {"content", *request.system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    json body{{"model", request.model_id},
              {"messages", messages},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output_tokens}};

    json reply = impl_->post(impl_->config.chat_path, body);

    ChatResponse response;
    try {
        response.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw backend_error("chat response missing choices[0].message.content");
    }
    if (reply.contains("usage")) {
        response.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0LL);
        response.usage.completion_tokens = reply["usage"].value("completion_tokens", 0LL);
    }
    response.backend_id = id();
    return response;
}

std::vector<std::vector<double>> HttpBackend::embed(const std::vector<std::string>& texts,
                                                    const std::string& model_id) {
    json body{{"model", model_id}, {"input", texts}};
    json reply = impl_->post(impl_->config.embeddings_path, body);

    std::vector<std::vector<double>> out(texts.size());
    try {
        for (const auto& item : reply.at("data")) {
            std::size_t index = item.at("index").get<std::size_t>();
            if (index >= out.size()) {
                throw backend_error("embedding index out of range");
            }
            out[index] = item.at("embedding").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw backend_error(std::string("embeddings response malformed: ") + e.what());
    }
    for (const auto& v : out) {
        if (v.empty()) {
            throw backend_error("embeddings response missing an input's vector");
        }
    }
    return out;
}

}  // namespace reckon::llm
