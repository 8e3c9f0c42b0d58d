#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reckon {

struct TokenUsage {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& o) {
        prompt_tokens += o.prompt_tokens;
        completion_tokens += o.completion_tokens;
        return *this;
    }
};

enum class UnitStatus { pending, correct, incorrect };

std::string to_string(UnitStatus s);
UnitStatus unit_status_from_string(const std::string& s);

/// One atomic fact extracted from the reference corpus; the unit of judging.
struct KnowledgeUnit {
    std::string id;
    std::string type_tag;
    std::string keyword;
    std::string description;
    std::string source_doc_id;
    std::string source_passage_id;
    std::string source_text;  // verbatim passage the unit came from
    UnitStatus status = UnitStatus::pending;
    int ignored_count = 0;
    std::optional<int> resolved_round;
};

struct Cluster {
    std::string id;
    int round = 0;
    std::string label;
    std::vector<std::string> member_ids;
    std::vector<double> centroid;
    bool singleton_isolated = false;  // forced out of k-means by ignored-count
};

enum class InterrogativeType { who, what, when, where, why, how, other };

std::string to_string(InterrogativeType t);
InterrogativeType interrogative_from_string(const std::string& s);

struct Question {
    std::string id;
    int round = 0;
    std::string cluster_id;
    std::string text;
    std::vector<std::string> target_unit_ids;
    InterrogativeType interrogative_type = InterrogativeType::other;
};

struct Answer {
    std::string question_id;
    std::string model_id;
    std::string text;
    TokenUsage usage;
};

enum class Verdict { correct, incorrect, ignored };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Judgment {
    std::string unit_id;
    std::string question_id;
    int round = 0;
    Verdict verdict = Verdict::ignored;
    std::optional<std::string> extracted_content;  // absent iff ignored
    std::optional<std::string> reason;
    std::string judge_model_id;
    bool parse_failure = false;  // verdict unparseable after re-ask
};

enum class Stage {
    extract,
    cluster_label,
    question_gen,
    get_response,
    judge_extract,
    judge_verdict,
    embed,
    baseline,
};

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct StageTotals {
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    long long calls = 0;

    StageTotals& operator+=(const StageTotals& o) {
        prompt_tokens += o.prompt_tokens;
        completion_tokens += o.completion_tokens;
        calls += o.calls;
        return *this;
    }
};

/// Per-stage (and per stage+model) aggregation of ledger entries.
struct CostSummary {
    std::map<Stage, StageTotals> per_stage;
    std::map<std::pair<Stage, std::string>, StageTotals> per_stage_model;

    StageTotals total() const;
    /// Entry-wise difference (this - earlier); used for per-round deltas.
    CostSummary minus(const CostSummary& earlier) const;
};

struct RoundRecord {
    int round = 0;
    int remaining_before = 0;
    int remaining_after = 0;
    int cluster_count = 0;
    int questions_issued = 0;
    CostSummary cost_delta;
};

enum class TerminationReason { exhausted, converged, max_rounds };

std::string to_string(TerminationReason r);
TerminationReason termination_from_string(const std::string& s);

/// Mutable run container: the unit lifecycle plus per-round history.
/// Single-writer; share read-only snapshots across workers.
struct RunState {
    std::string config_hash;
    std::vector<KnowledgeUnit> units;
    std::vector<RoundRecord> rounds;
    int current_round = 0;  // == rounds.size()
    bool terminated = false;
    std::optional<TerminationReason> termination_reason;

    int pending_count() const;
    KnowledgeUnit* find_unit(const std::string& id);
    const KnowledgeUnit* find_unit(const std::string& id) const;
};

/// Applies one judgment to a pending unit. correct/incorrect resolve the unit
/// and stamp resolved_round; ignored increments ignored_count. Rejects any
/// judgment on an already-resolved unit.
void transition_unit(KnowledgeUnit& unit, const Judgment& judgment);

}  // namespace reckon
