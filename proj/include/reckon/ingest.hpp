#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "reckon/llm.hpp"

namespace reckon::ingest {

struct Document {
    std::string doc_id;
    std::string text;
    std::map<std::string, std::string> metadata;
};

struct Passage {
    std::string passage_id;
    std::string doc_id;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::string text;
};

/// Loads a directory of *.txt files (doc_id = stem) or a line-delimited file
/// of {id, text} records. Output is sorted by doc_id ascending.
std::vector<Document> load_corpus(const std::filesystem::path& path);

/// Splits a document into passages of at most max_chars, preferring blank-line
/// boundaries, then sentence ends, then a hard cut. Passage texts concatenate
/// back to the document byte-exactly.
std::vector<Passage> chunk(const Document& doc, std::size_t max_chars = 4000);

/// Top-k documents by cosine similarity of embeddings to query_text,
/// descending, ties broken by doc_id ascending.
std::vector<Document> similarity_select(const std::vector<Document>& corpus,
                                        const std::string& query_text, std::size_t k,
                                        llm::LlmClient& client, const std::string& embed_model);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);
void l2_normalize(std::vector<double>& v);

}  // namespace reckon::ingest
