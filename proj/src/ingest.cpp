#include "reckon/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "reckon/error.hpp"
#include "reckon/jsonl.hpp"
#include "reckon/text.hpp"

namespace reckon::ingest {

using nlohmann::json;

namespace {

std::vector<Document> load_directory(const std::filesystem::path& dir) {
    std::vector<Document> docs;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        Document d;
        d.doc_id = entry.path().stem().string();
        d.text = read_file(entry.path());
        if (d.text.empty()) {
            throw precondition_error("document " + d.doc_id + " is empty");
        }
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<Document> load_records(const std::filesystem::path& file) {
    std::vector<Document> docs;
    for (const auto& r : read_jsonl(file)) {
        if (!r.contains("id") || !r.contains("text")) {
            throw precondition_error(file.string() + ": record missing id or text");
        }
        Document d;
        d.doc_id = r.at("id").get<std::string>();
        d.text = r.at("text").get<std::string>();
        if (d.text.empty()) {
            throw precondition_error("document " + d.doc_id + " is empty");
        }
        if (r.contains("metadata")) {
            for (const auto& [k, v] : r.at("metadata").items()) {
                d.metadata[k] = v.get<std::string>();
            }
        }
        docs.push_back(std::move(d));
    }
    return docs;
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    std::vector<Document> docs;
    if (std::filesystem::is_directory(path)) {
        docs = load_directory(path);
    } else if (std::filesystem::is_regular_file(path)) {
        docs = load_records(path);
    } else {
        throw precondition_error("corpus path not readable: " + path.string());
    }
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    std::set<std::string> seen;
    for (const auto& d : docs) {
        if (!seen.insert(d.doc_id).second) {
            throw precondition_error("duplicate doc_id: " + d.doc_id);
        }
    }
    return docs;
}

namespace {

// Largest split position in (0, limit] that lands just after a blank line,
// else just after sentence-ending punctuation + whitespace, else limit.
std::size_t split_point(const std::string& text, std::size_t limit) {
    for (std::size_t p = limit; p >= 2; --p) {
        if (text[p - 1] == '\n' && text[p - 2] == '\n') return p;
    }
    for (std::size_t p = limit; p >= 2; --p) {
        char punct = text[p - 2];
        char sep = text[p - 1];
        if ((punct == '.' || punct == '!' || punct == '?') &&
            (sep == ' ' || sep == '\n' || sep == '\t')) {
            return p;
        }
    }
    return limit;
}

}  // namespace

std::vector<Passage> chunk(const Document& doc, std::size_t max_chars) {
    if (max_chars < 200) {
        throw precondition_error("chunk max_chars must be >= 200");
    }
    std::vector<Passage> passages;
    std::size_t start = 0;
    while (start < doc.text.size()) {
        std::size_t remaining = doc.text.size() - start;
        std::size_t take = remaining <= max_chars
                               ? remaining
                               : split_point(doc.text.substr(start, max_chars + 1), max_chars);
        Passage p;
        p.doc_id = doc.doc_id;
        p.char_start = start;
        p.char_end = start + take;
        p.text = doc.text.substr(start, take);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "_p%04zu", passages.size());
        p.passage_id = doc.doc_id + buf;
        passages.push_back(std::move(p));
        start += take;
    }
    return passages;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw precondition_error("cosine similarity dimension mismatch");
    }
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    double denom = std::sqrt(na) * std::sqrt(nb);
    return denom > 0 ? dot / denom : 0.0;
}

void l2_normalize(std::vector<double>& v) {
    double norm_sq = 0;
    for (double x : v) norm_sq += x * x;
    double norm = std::sqrt(norm_sq);
    if (norm > 0) {
        for (auto& x : v) x /= norm;
    }
}

std::vector<Document> similarity_select(const std::vector<Document>& corpus,
                                        const std::string& query_text, std::size_t k,
                                        llm::LlmClient& client, const std::string& embed_model) {
    if (k > corpus.size()) {
        throw precondition_error("similarity_select k exceeds corpus size");
    }
    std::vector<std::string> texts;
    texts.reserve(corpus.size() + 1);
    texts.push_back(query_text);
    for (const auto& d : corpus) texts.push_back(d.text);
    auto vectors = client.embed(Stage::embed, texts, embed_model);

    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        ranked.emplace_back(cosine_similarity(vectors[0], vectors[i + 1]), i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return corpus[a.second].doc_id < corpus[b.second].doc_id;
    });
    std::vector<Document> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.push_back(corpus[ranked[i].second]);
    }
    return out;
}

}  // namespace reckon::ingest
