#pragma once

#include <string>
#include <vector>

#include "reckon/ingest.hpp"
#include "reckon/llm.hpp"
#include "reckon/types.hpp"

namespace reckon::extract {

/// Prompt asking the model to list the passage's atomic facts as one JSON
/// object per line ({"type", "keyword", "description"}) inside a fenced block.
llm::ChatRequest build_extraction_prompt(const ingest::Passage& passage,
                                         const std::string& model_id, double temperature,
                                         int max_output_tokens);

struct ParseOutcome {
    std::vector<KnowledgeUnit> units;
    int skipped_records = 0;   // well-formed lines missing required fields, or bad JSON lines
    bool unparseable = false;  // nothing usable in the whole completion
};

/// Turns a completion into pending units (provenance from the passage).
/// Malformed records are skipped and counted; a completion with no usable
/// record at all is flagged unparseable so the caller can re-ask once.
ParseOutcome parse_units(const std::string& raw, const ingest::Passage& passage);

struct ExtractionStats {
    int passages = 0;
    int parse_failures = 0;    // passages still unparseable after the re-ask
    int skipped_records = 0;
    int duplicates_merged = 0;
};

/// Extracts units for every passage (one chat call each, re-ask on a fully
/// unparseable reply), merges in passage order, dedups. Deterministic for a
/// fixed backend.
std::vector<KnowledgeUnit> extract_units(const std::vector<ingest::Passage>& passages,
                                         llm::LlmClient& client, const std::string& model_id,
                                         double temperature, int max_output_tokens,
                                         int parallelism, ExtractionStats* stats = nullptr);

/// Merges units whose normalized (keyword, description) collide; first
/// occurrence wins; output sorted by id.
std::vector<KnowledgeUnit> dedup_units(const std::vector<KnowledgeUnit>& units,
                                       int* merged_count = nullptr);

}  // namespace reckon::extract
