// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"
#include "cweseed/points.hpp"
#include "cweseed/prompts.hpp"
#include "cweseed/provider.hpp"
#include "cweseed/runner.hpp"
#include "cweseed/textdiff.hpp"
#include "cweseed/trace.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::injector {

enum class Status { Validated, SyntaxFailed, BehaviorDiverged, ProviderFailed };

std::string_view to_string(Status status);
Status status_from_string(std::string_view name);

struct InjectionCandidate {
    std::string candidate_id; // "<file-stem>__<cwe-id>__<attempt>"
    corpus::CweEntry cwe;
    std::string file_path;
    corpus::Language language = corpus::Language::Python;
    std::string original_code;
    std::string injected_code;
    std::vector<textdiff::LineRange> changed_regions;
    std::string rationale; // model's description of the flaw placement
    Status status = Status::ProviderFailed;
    std::string failure_reason; // empty when Validated
    runner::Verdict behavioral_verdict = runner::Verdict::SyntaxOnly;
    int attempts = 0;
    std::optional<std::string> html; // set by the render stage
};

nlohmann::ordered_json to_json(const InjectionCandidate& candidate);
InjectionCandidate candidate_from_json(const nlohmann::json& doc);

/// Renders the injection prompt: course context, CWE identity, the full
/// file, and the serialized candidate points (which are advisory; an empty
/// list instructs free placement).
/// Errors: TemplateVarMissing.
prompts::PromptBundle build_injection_prompt(
    const corpus::AssignmentContext& ctx, const corpus::SubmissionFile& file,
    const corpus::CweEntry& cwe, const std::vector<points::InjectionPoint>& pts,
    const prompts::PromptRecord& record);

/// Repair turn: the base prompt with the exact diagnostics text appended.
prompts::PromptBundle build_repair_prompt(const prompts::PromptBundle& base,
                                          const prompts::PromptRecord& repair_record,
                                          const std::string& reason,
                                          const std::string& diagnostics);

struct InjectOptions {
    int max_attempts = 3;
    prompts::PromptRecord prompt;
    prompts::PromptRecord repair_prompt;
    const runner::SmokeSuite* suite = nullptr;   // null or empty -> SyntaxOnly
    const runner::ProcessRunner* proc = nullptr; // required when suite has cases
    std::vector<trace::TraceEvent>* trace_sink = nullptr; // one event per call
};

/// Prompt -> strip fences -> syntax gate -> behavior gate; failed gates
/// re-prompt with diagnostics until max_attempts. Never throws for
/// per-candidate failures: the candidate carries its failure status.
InjectionCandidate inject(provider::LlmProvider& llm,
                          const corpus::AssignmentContext& ctx,
                          const corpus::SubmissionFile& file,
                          const corpus::CweEntry& cwe,
                          const std::vector<points::InjectionPoint>& pts,
                          const InjectOptions& options);

/// "<file-stem>__<cwe-id>__<attempt>"
std::string make_candidate_id(const std::string& file_path,
                              const std::string& cwe_id, int attempt);

} // namespace cweseed::injector
