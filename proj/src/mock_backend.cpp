#include "reckon/mock_backend.hpp"

#include <cmath>

#include <json.hpp>

#include "reckon/error.hpp"
#include "reckon/jsonl.hpp"
#include "reckon/text.hpp"

namespace reckon::llm {

using nlohmann::json;

Playbook Playbook::load_jsonl(const std::filesystem::path& path) {
    Playbook pb;
    for (const auto& r : read_jsonl(path)) {
        PlaybookRule rule;
        std::string kind = r.value("kind", std::string("chat"));
        if (kind == "chat") {
            rule.kind = PlaybookRule::Kind::chat;
        } else if (kind == "embed") {
            rule.kind = PlaybookRule::Kind::embed;
        } else {
            throw config_error("playbook rule kind must be chat or embed, got " + kind);
        }
        std::string mk = r.value("match_kind", std::string("substring"));
        if (mk == "substring") {
            rule.match_kind = PlaybookRule::MatchKind::substring;
        } else if (mk == "regex") {
            rule.match_kind = PlaybookRule::MatchKind::regex;
        } else {
            throw config_error("playbook match_kind must be substring or regex, got " + mk);
        }
        rule.pattern = r.at("pattern").get<std::string>();
        if (rule.kind == PlaybookRule::Kind::chat) {
            if (r.contains("response_text")) {
                rule.response_text = r.at("response_text").get<std::string>();
            }
        } else {
            rule.vector = r.at("vector").get<std::vector<double>>();
        }
        if (r.contains("prompt_tokens")) rule.prompt_tokens = r.at("prompt_tokens").get<long long>();
        if (r.contains("completion_tokens")) {
            rule.completion_tokens = r.at("completion_tokens").get<long long>();
        }
        rule.max_uses = r.value("max_uses", 0LL);
        std::string fail = r.value("fail", std::string());
        if (fail == "transport") {
            rule.fail = PlaybookRule::FailKind::transport;
        } else if (fail == "refusal") {
            rule.fail = PlaybookRule::FailKind::refusal;
        } else if (!fail.empty()) {
            throw config_error("playbook fail must be transport or refusal, got " + fail);
        }
        pb.rules.push_back(std::move(rule));
    }
    return pb;
}

MockBackend::MockBackend(Playbook playbook, std::size_t embedding_dim)
    : default_response_(std::move(playbook.default_response)), embedding_dim_(embedding_dim) {
    if (embedding_dim_ == 0) {
        throw config_error("mock embedding dimension must be positive");
    }
    for (auto& rule : playbook.rules) {
        CompiledRule c;
        if (rule.match_kind == PlaybookRule::MatchKind::regex) {
            try {
                c.re.emplace(rule.pattern, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                throw config_error("bad playbook regex '" + rule.pattern + "': " + e.what());
            }
        }
        c.rule = std::move(rule);
        rules_.push_back(std::move(c));
    }
}

const MockBackend::CompiledRule* MockBackend::match_locked(PlaybookRule::Kind kind,
                                                           const std::string& text) {
    for (auto& c : rules_) {
        if (c.rule.kind != kind) continue;
        if (c.rule.max_uses > 0 && c.uses >= c.rule.max_uses) continue;
        bool hit = c.re ? std::regex_search(text, *c.re)
                        : text.find(c.rule.pattern) != std::string::npos;
        if (hit) {
            ++c.uses;
            return &c;
        }
    }
    return nullptr;
}

namespace {

std::string substitute(std::string templ, const std::string& user_text) {
    const std::string token = "{{user_text}}";
    std::size_t pos = 0;
    while ((pos = templ.find(token, pos)) != std::string::npos) {
        templ.replace(pos, token.size(), user_text);
        pos += user_text.size();
    }
    return templ;
}

}  // namespace

ChatResponse MockBackend::chat(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    const CompiledRule* hit = match_locked(PlaybookRule::Kind::chat, request.user_text);
    std::string reply;
    std::optional<long long> pt, ct;
    if (hit) {
        switch (hit->rule.fail) {
            case PlaybookRule::FailKind::transport:
                throw TransportError("scripted transport failure on '" + hit->rule.pattern + "'");
            case PlaybookRule::FailKind::refusal:
                throw backend_error("scripted refusal on '" + hit->rule.pattern + "'");
            case PlaybookRule::FailKind::none:
                break;
        }
        reply = substitute(hit->rule.response_text, request.user_text);
        pt = hit->rule.prompt_tokens;
        ct = hit->rule.completion_tokens;
    } else if (default_response_) {
        reply = *default_response_;
    } else {
        throw backend_error("no playbook rule matches request: " +
                            request.user_text.substr(0, 160));
    }

    ChatResponse response;
    response.text = reply;
    response.usage.prompt_tokens = pt ? *pt : estimate_tokens(request.user_text);
    response.usage.completion_tokens = ct ? *ct : estimate_tokens(reply);
    response.backend_id = id();
    return response;
}

std::vector<double> MockBackend::hash_embedding(const std::string& model_id,
                                                const std::string& text, std::size_t dim) {
    std::uint64_t seed = fnv1a64(model_id + "\x1f" + normalize_text(text));
    std::vector<double> v(dim);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        std::uint64_t bits = splitmix64(seed + i);
        // top 53 bits -> [0,1) -> [-1,1)
        double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        v[i] = 2.0 * u - 1.0;
        norm_sq += v[i] * v[i];
    }
    double norm = std::sqrt(norm_sq);
    if (norm > 0) {
        for (auto& x : v) x /= norm;
    } else {
        v[0] = 1.0;
    }
    return v;
}

std::vector<std::vector<double>> MockBackend::embed(const std::vector<std::string>& texts,
                                                    const std::string& model_id) {
    std::lock_guard lock(mutex_);
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        const CompiledRule* hit = match_locked(PlaybookRule::Kind::embed, text);
        if (hit) {
            if (hit->rule.vector.size() != embedding_dim_) {
                throw config_error("embed rule '" + hit->rule.pattern + "' has dimension " +
                                   std::to_string(hit->rule.vector.size()) + ", expected " +
                                   std::to_string(embedding_dim_));
            }
            out.push_back(hit->rule.vector);
        } else {
            out.push_back(hash_embedding(model_id, text, embedding_dim_));
        }
    }
    return out;
}

}  // namespace reckon::llm
