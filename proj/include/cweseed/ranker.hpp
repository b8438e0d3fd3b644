// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"
#include "cweseed/evaluator.hpp"
#include "cweseed/injector.hpp"
#include "cweseed/prompts.hpp"
#include "cweseed/provider.hpp"
#include "cweseed/trace.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cweseed::ranker {

/// Dimension weights; keys must equal the evaluator's dimension set and at
/// least one weight must be positive.
struct RankWeights {
    std::vector<std::pair<std::string, double>> entries;

    static RankWeights equal(const std::vector<std::string>& dimensions);
};

/// weighted_total = sum(w_d * score_d) / sum(w_d), a real in [1,10].
/// Errors: DimensionMismatch, BadWeights.
std::vector<std::pair<std::string, double>> scorecard(
    std::span<const evaluator::EvaluationReport> reports, const RankWeights& weights);

struct ScorecardEntry {
    double weighted_total = 0.0;
    std::vector<std::pair<std::string, int>> per_dimension;
};

struct RankingDecision {
    std::string submission_id;
    std::string mode = "score"; // "score" | "llm_override"
    std::vector<std::string> ordering; // best first; permutation of validated ids
    std::string chosen; // == ordering.front()
    std::vector<std::pair<std::string, ScorecardEntry>> scorecard; // id-sorted
    std::string justification;
    std::optional<std::string> peer_review_notes;
    std::optional<std::string> simulated_student_response;
};

nlohmann::ordered_json to_json(const RankingDecision& decision);
RankingDecision decision_from_json(const nlohmann::json& doc);

struct RankOptions {
    RankWeights weights;
    prompts::PromptRecord prompt;
    bool llm_override = false; // provider may re-pick among the top k
    int top_k = 3;
    std::string pedagogical_dimension = "pedagogical_value"; // tie-break score
    std::vector<trace::TraceEvent>* trace_sink = nullptr;
};

/// Deterministic ordering: weighted_total desc, then the pedagogical
/// dimension score desc, then candidate_id asc. The provider supplies the
/// narrative justification (plus optional peer-review and simulated student
/// notes) and, only in llm_override mode, may choose among the top k.
/// Errors: NoValidCandidates, DimensionMismatch.
RankingDecision rank(provider::LlmProvider& llm,
                     const std::string& submission_id,
                     std::span<const injector::InjectionCandidate> candidates,
                     std::span<const evaluator::EvaluationReport> reports,
                     const corpus::AssignmentContext& ctx,
                     const RankOptions& options);

} // namespace cweseed::ranker
