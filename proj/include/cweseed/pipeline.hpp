// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/config.hpp"
#include "cweseed/corpus.hpp"
#include "cweseed/evaluator.hpp"
#include "cweseed/htmlout.hpp"
#include "cweseed/injector.hpp"
#include "cweseed/outcomes.hpp"
#include "cweseed/points.hpp"
#include "cweseed/prompts.hpp"
#include "cweseed/provider.hpp"
#include "cweseed/ranker.hpp"
#include "cweseed/runner.hpp"
#include "cweseed/schema.hpp"
#include "cweseed/trace.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cweseed::pipeline {

struct RunManifest {
    std::string run_id;
    std::string created; // RFC 3339; the one volatile field here
    std::uint64_t seed = 0;
    std::string provider_kind;
    std::string submission_id;
    std::map<std::string, int> counts;
    std::map<std::string, std::vector<std::string>> artifacts; // run-dir relative
    struct Failure {
        std::string candidate_id;
        std::string status;
        std::string reason;
    };
    std::vector<Failure> failures;
    std::vector<std::string> warnings;
};

nlohmann::ordered_json to_json(const RunManifest& manifest);

struct RunResult {
    RunManifest manifest;
    std::filesystem::path run_dir;
    std::filesystem::path manifest_path;
};

/// Sequential controller over the agent chain. Construction ingests every
/// input named by the config (fatal errors throw); each stage persists its
/// JSON artifacts into the run directory and schema-validates them before
/// the next stage starts (Error("StageSchemaViolation") names the stage,
/// artifact and JSON-pointer path). Per-candidate failures never abort a
/// run; they land in the manifest's failure list.
class Pipeline {
public:
    explicit Pipeline(const config::PipelineConfig& config);

    /// Ingest -> select -> inject -> evaluate -> rank -> outcomes -> render,
    /// then the manifest.
    RunResult run();

    // Stage entry points for per-stage CLI commands. Each rewrites the
    // manifest so the run directory always describes itself.
    RunResult run_inject_only();
    RunResult resume_evaluate();
    RunResult resume_rank();
    RunResult resume_outcomes();
    RunResult resume_render(html::RenderMode mode_for_unchosen);

    const std::filesystem::path& run_dir() const { return run_dir_; }

private:
    void select_targets();
    void inject_stage();
    void evaluate_stage();
    void rank_stage();
    void outcomes_stage();
    void render_stage(html::RenderMode mode_for_unchosen = html::RenderMode::Challenge);
    RunResult finish();

    void persist_candidate(const injector::InjectionCandidate& candidate);
    void load_candidates_from_disk();
    void load_reports_from_disk();
    void load_decision_from_disk();
    void load_artifact_from_disk();
    std::string write_stage_artifact(const std::string& stage,
                                     const std::filesystem::path& relative,
                                     const nlohmann::ordered_json& doc,
                                     schema::StageSchema which);

    config::PipelineConfig config_;
    corpus::AssignmentContext ctx_;
    std::vector<corpus::CweEntry> catalog_;
    corpus::StudentSubmission submission_;
    points::HeuristicConfig heuristics_;
    runner::SmokeSuite suite_;
    runner::ProcessRunner proc_;
    prompts::PromptStore store_;
    std::unique_ptr<provider::LlmProvider> provider_;
    std::map<schema::StageSchema, nlohmann::json> schemas_;

    std::filesystem::path run_dir_;
    std::unique_ptr<trace::TraceWriter> tracer_;

    std::vector<corpus::SubmissionFile> selected_files_;
    std::vector<corpus::CweEntry> sampled_cwes_;
    std::vector<injector::InjectionCandidate> candidates_;
    std::vector<evaluator::EvaluationReport> reports_;
    std::optional<ranker::RankingDecision> decision_;
    std::optional<outcomes::LearningArtifact> artifact_;
    std::vector<RunManifest::Failure> failures_;
    std::vector<std::string> warnings_;
};

/// Validate every artifact in a run directory against the shipped schemas.
/// Returns (relative artifact path, violation) pairs; empty means clean.
std::vector<std::pair<std::string, schema::Violation>> validate_run_dir(
    const std::filesystem::path& run_dir, const std::filesystem::path& schema_dir);

/// Atomic whole-file write: temp file + rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace cweseed::pipeline
