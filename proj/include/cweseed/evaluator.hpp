// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"
#include "cweseed/embedding.hpp"
#include "cweseed/injector.hpp"
#include "cweseed/prompts.hpp"
#include "cweseed/provider.hpp"
#include "cweseed/trace.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace cweseed::evaluator {

struct Misconception {
    std::string statement;
    bool productive = true; // default when the provider omits the flag
};

struct EvaluationReport {
    std::string candidate_id;
    double similarity = 0.0;     // gestalt ratio, [0,1]
    double semantic_drift = 0.0; // 1 - cosine, [0,1]
    std::vector<std::pair<std::string, int>> dimension_scores; // config order
    std::string rationale;
    std::vector<Misconception> misconceptions;
};

nlohmann::ordered_json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& doc);

/// The four ranking dimensions: relevance, appropriateness, naturalness,
/// pedagogical_value.
const std::vector<std::string>& default_dimensions();

prompts::PromptBundle build_evaluation_prompt(
    const injector::InjectionCandidate& candidate,
    const corpus::AssignmentContext& ctx, double similarity, double drift,
    const std::vector<std::string>& dimensions,
    const prompts::PromptRecord& record);

struct EvaluateOptions {
    prompts::PromptRecord prompt;
    prompts::PromptRecord repair_prompt;
    std::vector<std::string> dimensions = default_dimensions();
    const metrics::EmbeddingProvider* embedder = nullptr; // default TF embedder
    std::vector<trace::TraceEvent>* trace_sink = nullptr;
};

/// Computes similarity and drift, embeds both into the prompt, and parses
/// the reply as JSON: one integer score in [1,10] per dimension, a
/// rationale, and a misconception list. A malformed reply gets exactly one
/// repair turn. Errors: BadCandidate (not Validated), MalformedReply,
/// ScoreOutOfRange.
EvaluationReport evaluate(provider::LlmProvider& llm,
                          const injector::InjectionCandidate& candidate,
                          const corpus::AssignmentContext& ctx,
                          const EvaluateOptions& options);

} // namespace cweseed::evaluator
