// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::runner {

struct SmokeCase {
    std::string name;
    std::string command; // /bin/sh -c command; {{file}} -> code file path
    std::string stdin_data;
    bool must_pass = true;
};

struct SmokeSuite {
    std::string suite_id;
    std::vector<SmokeCase> cases;
};

/// JSON: either a bare list of cases or {"suite_id": ..., "cases": [...]}.
/// Case fields: name, command, stdin (optional), must_pass (default true).
SmokeSuite load_smoke_suite(const std::filesystem::path& path);

struct CaseOutcome {
    int exit_code = -1; // 128+signal when killed
    std::string stdout_text; // normalized: trailing whitespace trimmed per line
    bool timed_out = false;
};

std::string normalize_output(std::string_view raw);

/// Runs one smoke case in a fresh temporary directory seeded with a copy of
/// the workspace tree, the code under test written over target_rel. The
/// child sees an allow-listed environment (PATH, HOME, LANG, LC_ALL) and is
/// killed at the timeout. This is process isolation for repeatability, NOT a
/// security sandbox.
class ProcessRunner {
public:
    struct Options {
        std::filesystem::path workspace; // copied per case; may be empty
        std::chrono::milliseconds timeout{10000};
    };

    ProcessRunner() = default;
    explicit ProcessRunner(Options options) : options_(std::move(options)) {}

    /// Errors: RunnerUnavailable (spawn failure). Timeouts are reported in
    /// the outcome, not thrown.
    CaseOutcome run_case(const SmokeCase& smoke, const std::string& target_rel,
                         std::string_view code) const;

    const Options& options() const { return options_; }

private:
    Options options_;
};

enum class Verdict { Equivalent, Diverged, SyntaxOnly };

std::string_view to_string(Verdict verdict);

struct CaseComparison {
    std::string name;
    CaseOutcome original;
    CaseOutcome injected;
    bool must_pass = true;
    bool agreed = false; // same exit code + stdout, neither timed out
};

struct EquivalenceReport {
    std::string suite_id;
    std::vector<CaseComparison> cases; // in suite order
    Verdict verdict = Verdict::SyntaxOnly;
};

/// Runs every suite case against the original file content and the injected
/// code. Equivalent iff every must_pass case agreed; an empty suite yields
/// SyntaxOnly with no cases.
EquivalenceReport behavioral_check(const corpus::SubmissionFile& original,
                                   std::string_view injected_code,
                                   const SmokeSuite& suite,
                                   const ProcessRunner& runner);

} // namespace cweseed::runner
