// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"
#include "cweseed/evaluator.hpp"
#include "cweseed/injector.hpp"
#include "cweseed/prompts.hpp"
#include "cweseed/provider.hpp"
#include "cweseed/ranker.hpp"
#include "cweseed/trace.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace cweseed::outcomes {

enum class BloomLevel { Remember, Understand, Apply, Analyze, Evaluate, Create };

std::string_view to_string(BloomLevel level);

/// Case-insensitive match against the six canonical labels; alternate
/// spellings ("analyse") are rejected. Errors: UnknownLevel.
BloomLevel validate_bloom(std::string_view tag);

struct Mcq {
    std::string stem;
    std::vector<std::string> options; // exactly 4, pairwise distinct
    int correct_index = 0;            // 0..3
    std::vector<std::string> distractor_rationales; // exactly 3
};

struct LearningArtifact {
    std::string submission_id;
    std::string candidate_id;
    std::string explanation; // <= 200 words
    Mcq mcq;
    std::string reflection_prompt;
    // one tag per item: explanation, mcq, reflection
    std::vector<std::pair<std::string, BloomLevel>> bloom_tags;
};

nlohmann::ordered_json to_json(const LearningArtifact& artifact);
LearningArtifact artifact_from_json(const nlohmann::json& doc);

prompts::PromptBundle build_outcomes_prompt(
    const ranker::RankingDecision& decision,
    const injector::InjectionCandidate& candidate,
    const evaluator::EvaluationReport* evaluation, // misconceptions source
    const corpus::AssignmentContext& ctx, const prompts::PromptRecord& record);

struct OutcomesOptions {
    prompts::PromptRecord prompt;
    prompts::PromptRecord repair_prompt;
    std::vector<trace::TraceEvent>* trace_sink = nullptr;
};

/// Parses the provider reply into a LearningArtifact and enforces the
/// structural invariants post-parse; one repair turn on a malformed reply.
/// Errors: BadCandidate (candidate is not the decision's chosen),
/// MalformedArtifact, ProviderFailed.
LearningArtifact generate_outcomes(provider::LlmProvider& llm,
                                   const ranker::RankingDecision& decision,
                                   const injector::InjectionCandidate& candidate,
                                   const evaluator::EvaluationReport* evaluation,
                                   const corpus::AssignmentContext& ctx,
                                   const OutcomesOptions& options);

} // namespace cweseed::outcomes
