#include "reckon/llm.hpp"

#include <atomic>
#include <thread>

#include <json.hpp>

#include "reckon/error.hpp"
#include "reckon/jsonl.hpp"
#include "reckon/text.hpp"

namespace reckon::llm {

using nlohmann::json;

void CostLedger::append(const CostLedgerEntry& entry) {
    std::lock_guard lock(mutex_);
    entries_.push_back(entry);
}

std::vector<CostLedgerEntry> CostLedger::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

CostSummary CostLedger::summary() const {
    std::lock_guard lock(mutex_);
    CostSummary s;
    for (const auto& e : entries_) {
        StageTotals t{e.usage.prompt_tokens, e.usage.completion_tokens, e.call_count};
        s.per_stage[e.stage] += t;
        s.per_stage_model[{e.stage, e.model_id}] += t;
    }
    return s;
}

void CostLedger::save_jsonl(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    std::vector<json> records;
    records.reserve(entries_.size());
    for (const auto& e : entries_) {
        records.push_back(json{{"stage", to_string(e.stage)},
                               {"model_id", e.model_id},
                               {"prompt_tokens", e.usage.prompt_tokens},
                               {"completion_tokens", e.usage.completion_tokens},
                               {"call_count", e.call_count},
                               {"wall_ms", e.wall_ms}});
    }
    write_jsonl(path, records);
}

void CostLedger::load_jsonl(const std::filesystem::path& path) {
    auto records = read_jsonl(path);
    std::lock_guard lock(mutex_);
    entries_.clear();
    for (const auto& r : records) {
        CostLedgerEntry e;
        e.stage = stage_from_string(r.at("stage").get<std::string>());
        e.model_id = r.at("model_id").get<std::string>();
        e.usage.prompt_tokens = r.at("prompt_tokens").get<long long>();
        e.usage.completion_tokens = r.at("completion_tokens").get<long long>();
        e.call_count = r.at("call_count").get<long long>();
        e.wall_ms = r.value("wall_ms", 0LL);
        entries_.push_back(e);
    }
}

LlmClient::LlmClient(std::shared_ptr<ChatBackend> backend, RetryPolicy retry)
    : backend_(std::move(backend)),
      retry_(retry),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (!backend_) {
        throw config_error("LlmClient requires a backend");
    }
}

ChatResponse LlmClient::chat_with_retry(const ChatRequest& request) {
    std::chrono::milliseconds delay = retry_.base_delay;
    for (int attempt = 1;; ++attempt) {
        try {
            return backend_->chat(request);
        } catch (const TransportError& e) {
            if (attempt >= retry_.max_attempts) {
                throw backend_error(std::string("transport failed after ") +
                                    std::to_string(attempt) + " attempts: " + e.what());
            }
            {
                std::lock_guard lock(mutex_);
                ++transport_retries_;
            }
            sleeper_(delay);
            delay = std::chrono::milliseconds(
                static_cast<long long>(static_cast<double>(delay.count()) * retry_.factor));
        }
    }
}

ChatResponse LlmClient::chat(Stage stage, const ChatRequest& request) {
    if (request.user_text.empty()) {
        throw precondition_error("chat request with empty user_text");
    }
    auto start = std::chrono::steady_clock::now();
    ChatResponse response = chat_with_retry(request);
    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (response.text.empty()) {
        throw backend_error("empty completion from " + backend_->id() + " for model " +
                            request.model_id);
    }

    CostLedgerEntry entry;
    entry.stage = stage;
    entry.model_id = request.model_id;
    entry.usage = response.usage;
    entry.call_count = 1;
    entry.wall_ms = wall.count();
    ledger_.append(entry);

    if (transcript_enabled_) {
        std::lock_guard lock(mutex_);
        transcript_.push_back(
            {stage, request.model_id, request.user_text, response.text, response.usage});
    }
    return response;
}

std::vector<std::vector<double>> LlmClient::embed(Stage stage,
                                                  const std::vector<std::string>& texts,
                                                  const std::string& model_id) {
    if (texts.empty()) {
        throw precondition_error("embed called with no texts");
    }

    std::vector<std::vector<double>> out(texts.size());
    std::vector<std::string> cache_keys(texts.size());
    std::vector<std::size_t> missing;
    {
        std::lock_guard lock(mutex_);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            cache_keys[i] = model_id + "\x1f" + normalize_text(texts[i]);
            auto it = embed_cache_.find(cache_keys[i]);
            if (it != embed_cache_.end()) {
                out[i] = it->second;
            } else {
                missing.push_back(i);
            }
        }
    }
    // Deduplicate backend work for texts that normalize identically.
    std::vector<std::size_t> to_fetch;
    std::unordered_map<std::string, std::size_t> first_seen;
    for (std::size_t i : missing) {
        auto [it, inserted] = first_seen.try_emplace(cache_keys[i], i);
        if (inserted) to_fetch.push_back(i);
    }

    if (!to_fetch.empty()) {
        std::vector<std::string> batch;
        batch.reserve(to_fetch.size());
        long long prompt_tokens = 0;
        for (std::size_t i : to_fetch) {
            batch.push_back(texts[i]);
            prompt_tokens += estimate_tokens(texts[i]);
        }
        auto start = std::chrono::steady_clock::now();
        auto vectors = backend_->embed(batch, model_id);
        auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start);
        if (vectors.size() != batch.size()) {
            throw backend_error("embedding backend returned " + std::to_string(vectors.size()) +
                                " vectors for " + std::to_string(batch.size()) + " texts");
        }
        std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
        for (const auto& v : vectors) {
            if (v.size() != dim) {
                throw backend_error("embedding dimension mismatch within batch");
            }
        }

        CostLedgerEntry entry;
        entry.stage = stage;
        entry.model_id = model_id;
        entry.usage = {prompt_tokens, 0};
        entry.call_count = 1;
        entry.wall_ms = wall.count();
        ledger_.append(entry);

        std::lock_guard lock(mutex_);
        for (std::size_t j = 0; j < to_fetch.size(); ++j) {
            embed_cache_[cache_keys[to_fetch[j]]] = vectors[j];
        }
    }
    {
        std::lock_guard lock(mutex_);
        for (std::size_t i : missing) {
            out[i] = embed_cache_.at(cache_keys[i]);
        }
    }

    std::size_t dim = out.front().size();
    for (const auto& v : out) {
        if (v.size() != dim) {
            throw backend_error("embedding dimension mismatch across cache entries");
        }
    }
    return out;
}

long long LlmClient::transport_retries() const {
    std::lock_guard lock(mutex_);
    return transport_retries_;
}

std::vector<TranscriptEntry> LlmClient::transcript() const {
    std::lock_guard lock(mutex_);
    return transcript_;
}

void LlmClient::save_transcript_jsonl(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    std::vector<json> records;
    records.reserve(transcript_.size());
    for (const auto& t : transcript_) {
        records.push_back(json{{"stage", to_string(t.stage)},
                               {"model_id", t.model_id},
                               {"user_text", t.user_text},
                               {"response_text", t.response_text},
                               {"prompt_tokens", t.usage.prompt_tokens},
                               {"completion_tokens", t.usage.completion_tokens}});
    }
    write_jsonl(path, records);
}

void LlmClient::save_embed_cache(const std::filesystem::path& path) const {
    std::lock_guard lock(mutex_);
    std::vector<std::pair<std::string, const std::vector<double>*>> items;
    items.reserve(embed_cache_.size());
    for (const auto& [key, vec] : embed_cache_) {
        items.emplace_back(key, &vec);
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<json> records;
    records.reserve(items.size());
    for (const auto& [key, vec] : items) {
        records.push_back(json{{"key", key}, {"vector", *vec}});
    }
    write_jsonl(path, records);
}

void LlmClient::load_embed_cache(const std::filesystem::path& path) {
    auto records = read_jsonl(path);
    std::lock_guard lock(mutex_);
    for (const auto& r : records) {
        embed_cache_[r.at("key").get<std::string>()] =
            r.at("vector").get<std::vector<double>>();
    }
}

std::size_t LlmClient::embed_cache_size() const {
    std::lock_guard lock(mutex_);
    return embed_cache_.size();
}

void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (parallelism <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::pair<std::size_t, std::exception_ptr>> errors;
    std::mutex errors_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(errors_mutex);
                    errors.emplace_back(i, std::current_exception());
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (!errors.empty()) {
        auto it = std::min_element(errors.begin(), errors.end(),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        std::rethrow_exception(it->second);
    }
}

}  // namespace reckon::llm
