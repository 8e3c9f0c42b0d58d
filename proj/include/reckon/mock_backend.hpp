#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "reckon/llm.hpp"

namespace reckon::llm {

/// One scripted rule. First matching rule wins. Rules without max_uses or
/// fail behave as a pure function of the request text.
struct PlaybookRule {
    enum class Kind { chat, embed };
    enum class MatchKind { substring, regex };
    enum class FailKind { none, transport, refusal };

    Kind kind = Kind::chat;
    MatchKind match_kind = MatchKind::substring;
    std::string pattern;
    std::string response_text;                    // chat rules; may contain {{user_text}}
    std::vector<double> vector;                   // embed rules
    std::optional<long long> prompt_tokens;       // usage override
    std::optional<long long> completion_tokens;   // usage override
    long long max_uses = 0;                       // 0 = unlimited
    FailKind fail = FailKind::none;
};

struct Playbook {
    std::vector<PlaybookRule> rules;
    /// Reply when no chat rule matches; unset means a hard error so that
    /// script gaps surface immediately.
    std::optional<std::string> default_response;

    static Playbook load_jsonl(const std::filesystem::path& path);
};

/// File-driven deterministic backend. Chat replies come from the playbook;
/// embeddings come from embed rules or, unmatched, from a hash of
/// (model_id, normalized text) projected to a unit-norm vector.
class MockBackend : public ChatBackend {
public:
    explicit MockBackend(Playbook playbook, std::size_t embedding_dim = 64);

    ChatResponse chat(const ChatRequest& request) override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                           const std::string& model_id) override;
    std::string id() const override { return "mock"; }

    /// The hash-derived default embedding, exposed so tests can recompute it.
    static std::vector<double> hash_embedding(const std::string& model_id,
                                              const std::string& text, std::size_t dim);

private:
    struct CompiledRule {
        PlaybookRule rule;
        std::optional<std::regex> re;
        long long uses = 0;
    };

    const CompiledRule* match_locked(PlaybookRule::Kind kind, const std::string& text);

    std::mutex mutex_;
    std::vector<CompiledRule> rules_;
    std::optional<std::string> default_response_;
    std::size_t embedding_dim_;
};

}  // namespace reckon::llm
