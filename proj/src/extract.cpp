#include "reckon/extract.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "reckon/error.hpp"
#include "reckon/text.hpp"

namespace reckon::extract {

using nlohmann::json;

llm::ChatRequest build_extraction_prompt(const ingest::Passage& passage,
                                         const std::string& model_id, double temperature,
                                         int max_output_tokens) {
    if (passage.text.empty()) {
        throw precondition_error("cannot build extraction prompt for empty passage");
    }
    std::ostringstream p;
    p << "TASK: extract knowledge units\n"
      << "Instruction: read the reference text below and list every atomic fact it states.\n"
      << "Output format: a fenced block (```) containing one JSON object per line, each with "
         "exactly the fields \"type\", \"keyword\", and \"description\".\n"
      << "Notation: \"type\" is a short category such as \"Factual Knowledge\"; \"keyword\" names "
         "the subject; \"description\" is one sentence grounded only in the reference text.\n"
      << "Reference text:\n"
      << passage.text << "\n";

    llm::ChatRequest req;
    req.model_id = model_id;
    req.system_text = "You extract structured knowledge from reference text.";
    req.user_text = p.str();
    req.temperature = temperature;
    req.max_output_tokens = max_output_tokens;
    return req;
}

namespace {

// Lines inside the first ``` fence, or every line when no fence is present.
std::vector<std::string> candidate_lines(const std::string& raw) {
    std::vector<std::string> lines;
    std::istringstream in(raw);
    std::string line;
    std::vector<std::string> all;
    std::vector<std::size_t> fence_indices;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("```", 0) == 0) fence_indices.push_back(all.size());
        all.push_back(line);
    }
    if (fence_indices.size() >= 2) {
        for (std::size_t i = fence_indices[0] + 1; i < fence_indices[1]; ++i) {
            lines.push_back(all[i]);
        }
    } else {
        lines = std::move(all);
    }
    return lines;
}

}  // namespace

ParseOutcome parse_units(const std::string& raw, const ingest::Passage& passage) {
    ParseOutcome out;
    int parsed_objects = 0;
    for (const auto& line : candidate_lines(raw)) {
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        bool looks_like_record = line[first] == '{';
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception&) {
            // a broken object is a skipped record; surrounding prose is not
            if (looks_like_record) out.skipped_records += 1;
            continue;
        }
        if (!record.is_object()) continue;
        ++parsed_objects;
        if (!record.contains("keyword") || !record.contains("description") ||
            !record["keyword"].is_string() || !record["description"].is_string() ||
            record["keyword"].get<std::string>().empty() ||
            record["description"].get<std::string>().empty()) {
            out.skipped_records += 1;
            continue;
        }
        KnowledgeUnit unit;
        unit.type_tag = record.value("type", std::string("Factual Knowledge"));
        unit.keyword = record["keyword"].get<std::string>();
        unit.description = record["description"].get<std::string>();
        unit.source_doc_id = passage.doc_id;
        unit.source_passage_id = passage.passage_id;
        unit.source_text = passage.text;
        unit.status = UnitStatus::pending;
        unit.ignored_count = 0;
        unit.id = make_unit_id(unit.source_doc_id, unit.keyword, unit.description);
        out.units.push_back(std::move(unit));
    }
    if (out.units.empty() && out.skipped_records == 0) {
        out.unparseable = true;
    }
    return out;
}

std::vector<KnowledgeUnit> extract_units(const std::vector<ingest::Passage>& passages,
                                         llm::LlmClient& client, const std::string& model_id,
                                         double temperature, int max_output_tokens,
                                         int parallelism, ExtractionStats* stats) {
    ExtractionStats local;
    local.passages = static_cast<int>(passages.size());
    std::vector<ParseOutcome> outcomes(passages.size());

    llm::parallel_for(passages.size(), parallelism, [&](std::size_t i) {
        auto request = build_extraction_prompt(passages[i], model_id, temperature,
                                               max_output_tokens);
        auto response = client.chat(Stage::extract, request);
        ParseOutcome parsed = parse_units(response.text, passages[i]);
        if (parsed.unparseable) {
            // one fresh re-ask, then record the failure and move on
            auto retry = client.chat(Stage::extract, request);
            parsed = parse_units(retry.text, passages[i]);
        }
        outcomes[i] = std::move(parsed);
    });

    std::vector<KnowledgeUnit> merged;
    for (auto& o : outcomes) {
        local.skipped_records += o.skipped_records;
        if (o.unparseable) local.parse_failures += 1;
        merged.insert(merged.end(), std::make_move_iterator(o.units.begin()),
                      std::make_move_iterator(o.units.end()));
    }
    auto deduped = dedup_units(merged, &local.duplicates_merged);
    if (stats) *stats = local;
    return deduped;
}

std::vector<KnowledgeUnit> dedup_units(const std::vector<KnowledgeUnit>& units,
                                       int* merged_count) {
    std::map<std::string, KnowledgeUnit> by_key;  // normalized (keyword, description)
    int merged = 0;
    for (const auto& u : units) {
        std::string key = normalize_text(u.keyword) + "\x1f" + normalize_text(u.description);
        auto [it, inserted] = by_key.try_emplace(key, u);
        if (!inserted) ++merged;
    }
    std::vector<KnowledgeUnit> out;
    out.reserve(by_key.size());
    for (auto& [key, unit] : by_key) {
        (void)key;
        out.push_back(std::move(unit));
    }
    std::sort(out.begin(), out.end(),
              [](const KnowledgeUnit& a, const KnowledgeUnit& b) { return a.id < b.id; });
    if (merged_count) *merged_count = merged;
    return out;
}

}  // namespace reckon::extract
