#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "reckon/types.hpp"

namespace reckon::llm {

struct ChatRequest {
    std::string model_id;
    std::optional<std::string> system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_output_tokens = 1024;
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
    std::string backend_id;
};

/// Retryable failure (network, 5xx). Non-retryable failures use
/// reckon::Error(ErrorKind::backend) directly.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(std::string m) : std::runtime_error(std::move(m)) {}
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse chat(const ChatRequest& request) = 0;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                                   const std::string& model_id) = 0;
    virtual std::string id() const = 0;
};

struct CostLedgerEntry {
    Stage stage = Stage::extract;
    std::string model_id;
    TokenUsage usage;
    long long call_count = 1;
    long long wall_ms = 0;
};

/// Thread-safe append-only call ledger. Totals are a pure fold of entries.
class CostLedger {
public:
    void append(const CostLedgerEntry& entry);
    std::vector<CostLedgerEntry> entries() const;
    CostSummary summary() const;
    void save_jsonl(const std::filesystem::path& path) const;
    void load_jsonl(const std::filesystem::path& path);

private:
    mutable std::mutex mutex_;
    std::vector<CostLedgerEntry> entries_;
};

struct TranscriptEntry {
    Stage stage = Stage::extract;
    std::string model_id;
    std::string user_text;
    std::string response_text;
    TokenUsage usage;
};

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds base_delay{500};
    double factor = 2.0;
};

/// Front door for all model traffic: stage-attributed ledger accounting,
/// transport retries with exponential backoff, an embedding cache keyed by
/// (model_id, normalized text), and an optional request transcript.
class LlmClient {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    LlmClient(std::shared_ptr<ChatBackend> backend, RetryPolicy retry = {});

    ChatResponse chat(Stage stage, const ChatRequest& request);
    std::vector<std::vector<double>> embed(Stage stage, const std::vector<std::string>& texts,
                                           const std::string& model_id);

    CostLedger& ledger() { return ledger_; }
    const CostLedger& ledger() const { return ledger_; }

    long long transport_retries() const;

    void enable_transcript(bool on) { transcript_enabled_ = on; }
    std::vector<TranscriptEntry> transcript() const;
    void save_transcript_jsonl(const std::filesystem::path& path) const;

    void save_embed_cache(const std::filesystem::path& path) const;
    void load_embed_cache(const std::filesystem::path& path);
    std::size_t embed_cache_size() const;

    /// Test hook: replaces the real backoff sleep.
    void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }

private:
    ChatResponse chat_with_retry(const ChatRequest& request);

    std::shared_ptr<ChatBackend> backend_;
    RetryPolicy retry_;
    Sleeper sleeper_;
    CostLedger ledger_;
    long long transport_retries_ = 0;
    mutable std::mutex mutex_;  // cache + transcript + retry counter

    std::unordered_map<std::string, std::vector<double>> embed_cache_;
    bool transcript_enabled_ = false;
    std::vector<TranscriptEntry> transcript_;
};

/// Runs fn(0..n-1) on up to `parallelism` threads. Results must be written to
/// pre-sized slots; the lowest-index exception is rethrown after all workers
/// finish, so failures are deterministic.
void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn);

}  // namespace reckon::llm
