#include "reckon/types.hpp"

#include "reckon/error.hpp"

namespace reckon {

std::string to_string(UnitStatus s) {
    switch (s) {
        case UnitStatus::pending: return "pending";
        case UnitStatus::correct: return "correct";
        case UnitStatus::incorrect: return "incorrect";
    }
    return "pending";
}

UnitStatus unit_status_from_string(const std::string& s) {
    if (s == "pending") return UnitStatus::pending;
    if (s == "correct") return UnitStatus::correct;
    if (s == "incorrect") return UnitStatus::incorrect;
    throw corruption_error("unknown unit status: " + s);
}

std::string to_string(InterrogativeType t) {
    switch (t) {
        case InterrogativeType::who: return "who";
        case InterrogativeType::what: return "what";
        case InterrogativeType::when: return "when";
        case InterrogativeType::where: return "where";
        case InterrogativeType::why: return "why";
        case InterrogativeType::how: return "how";
        case InterrogativeType::other: return "other";
    }
    return "other";
}

InterrogativeType interrogative_from_string(const std::string& s) {
    if (s == "who") return InterrogativeType::who;
    if (s == "what") return InterrogativeType::what;
    if (s == "when") return InterrogativeType::when;
    if (s == "where") return InterrogativeType::where;
    if (s == "why") return InterrogativeType::why;
    if (s == "how") return InterrogativeType::how;
    if (s == "other") return InterrogativeType::other;
    throw corruption_error("unknown interrogative type: " + s);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::correct: return "correct";
        case Verdict::incorrect: return "incorrect";
        case Verdict::ignored: return "ignored";
    }
    return "ignored";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "correct") return Verdict::correct;
    if (s == "incorrect") return Verdict::incorrect;
    if (s == "ignored") return Verdict::ignored;
    throw corruption_error("unknown verdict: " + s);
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::extract: return "extract";
        case Stage::cluster_label: return "cluster_label";
        case Stage::question_gen: return "question_gen";
        case Stage::get_response: return "get_response";
        case Stage::judge_extract: return "judge_extract";
        case Stage::judge_verdict: return "judge_verdict";
        case Stage::embed: return "embed";
        case Stage::baseline: return "baseline";
    }
    return "extract";
}

Stage stage_from_string(const std::string& s) {
    if (s == "extract") return Stage::extract;
    if (s == "cluster_label") return Stage::cluster_label;
    if (s == "question_gen") return Stage::question_gen;
    if (s == "get_response") return Stage::get_response;
    if (s == "judge_extract") return Stage::judge_extract;
    if (s == "judge_verdict") return Stage::judge_verdict;
    if (s == "embed") return Stage::embed;
    if (s == "baseline") return Stage::baseline;
    throw corruption_error("unknown stage: " + s);
}

std::string to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::exhausted: return "exhausted";
        case TerminationReason::converged: return "converged";
        case TerminationReason::max_rounds: return "max_rounds";
    }
    return "exhausted";
}

TerminationReason termination_from_string(const std::string& s) {
    if (s == "exhausted") return TerminationReason::exhausted;
    if (s == "converged") return TerminationReason::converged;
    if (s == "max_rounds") return TerminationReason::max_rounds;
    throw corruption_error("unknown termination reason: " + s);
}

StageTotals CostSummary::total() const {
    StageTotals t;
    for (const auto& [stage, st] : per_stage) {
        (void)stage;
        t += st;
    }
    return t;
}

CostSummary CostSummary::minus(const CostSummary& earlier) const {
    CostSummary out;
    for (const auto& [stage, st] : per_stage) {
        StageTotals d = st;
        auto it = earlier.per_stage.find(stage);
        if (it != earlier.per_stage.end()) {
            d.prompt_tokens -= it->second.prompt_tokens;
            d.completion_tokens -= it->second.completion_tokens;
            d.calls -= it->second.calls;
        }
        if (d.prompt_tokens != 0 || d.completion_tokens != 0 || d.calls != 0) {
            out.per_stage[stage] = d;
        }
    }
    for (const auto& [key, st] : per_stage_model) {
        StageTotals d = st;
        auto it = earlier.per_stage_model.find(key);
        if (it != earlier.per_stage_model.end()) {
            d.prompt_tokens -= it->second.prompt_tokens;
            d.completion_tokens -= it->second.completion_tokens;
            d.calls -= it->second.calls;
        }
        if (d.prompt_tokens != 0 || d.completion_tokens != 0 || d.calls != 0) {
            out.per_stage_model[key] = d;
        }
    }
    return out;
}

int RunState::pending_count() const {
    int n = 0;
    for (const auto& u : units) {
        if (u.status == UnitStatus::pending) ++n;
    }
    return n;
}

KnowledgeUnit* RunState::find_unit(const std::string& id) {
    for (auto& u : units) {
        if (u.id == id) return &u;
    }
    return nullptr;
}

const KnowledgeUnit* RunState::find_unit(const std::string& id) const {
    for (const auto& u : units) {
        if (u.id == id) return &u;
    }
    return nullptr;
}

void transition_unit(KnowledgeUnit& unit, const Judgment& judgment) {
    if (judgment.unit_id != unit.id) {
        throw precondition_error("judgment " + judgment.unit_id + " applied to unit " + unit.id);
    }
    if (unit.status != UnitStatus::pending) {
        throw precondition_error("unit " + unit.id + " is already resolved (" +
                                 to_string(unit.status) + ")");
    }
    switch (judgment.verdict) {
        case Verdict::correct:
            unit.status = UnitStatus::correct;
            unit.resolved_round = judgment.round;
            break;
        case Verdict::incorrect:
            unit.status = UnitStatus::incorrect;
            unit.resolved_round = judgment.round;
            break;
        case Verdict::ignored:
            unit.ignored_count += 1;
            break;
    }
}

}  // namespace reckon
