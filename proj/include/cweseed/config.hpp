// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/provider.hpp"
#include "cweseed/ranker.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cweseed::config {

struct PipelineConfig {
    // inputs
    std::filesystem::path submission_root;
    std::filesystem::path context_path;
    std::filesystem::path cwe_csv_path;
    std::filesystem::path heuristics_path;  // empty -> built-in defaults
    std::filesystem::path smoke_suite_path; // empty -> SyntaxOnly gating
    std::filesystem::path prompt_dir = "prompts";
    std::filesystem::path schema_dir = "schemas";
    // outputs
    std::filesystem::path output_dir = "runs";
    std::string run_id; // empty -> timestamp tag
    // behavior
    std::uint64_t seed = 0;
    provider::ProviderSpec provider;
    std::vector<std::string> dimensions; // empty -> evaluator defaults
    ranker::RankWeights weights;         // empty -> equal weights
    int max_attempts = 3;
    int jobs = 1;
    bool llm_override = false;
    std::optional<int> target_file_count; // overrides the context's k
    std::optional<int> target_cwe_count;  // overrides the context's n
    std::string submission_id;            // empty -> root directory name
};

/// Load the TOML-subset config file and apply `overrides` (dotted keys, e.g.
/// "seed", "provider.kind", "weights.relevance") on top. Relative paths in
/// the file resolve against the file's directory; defaults fill anything
/// unset. Errors: ParseError, UnknownOverride, FileNotFound.
PipelineConfig resolve_config(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Apply one dotted-key override. Errors: UnknownOverride, ParseError.
void apply_override(PipelineConfig& config, const std::string& key,
                    const std::string& value);

} // namespace cweseed::config
