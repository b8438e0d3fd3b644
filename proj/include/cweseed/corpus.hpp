// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cweseed::corpus {

/// One Common Weakness Enumeration record from a catalog CSV export.
/// `metadata` keeps every column beyond ID/Name/Description, in column order.
struct CweEntry {
    std::string id; // "CWE-<digits>"
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> metadata;
};

enum class Language { Python, Java, Kotlin, JavaScript };

std::string_view to_string(Language lang);
std::optional<Language> language_from_name(std::string_view name);
std::optional<Language> language_from_extension(const std::filesystem::path& path);

struct SubmissionFile {
    std::string path; // relative to the submission root
    Language language = Language::Python;
    std::string content;
    std::size_t line_count = 0; // newline-separated lines; trailing newline adds none
    std::size_t char_count = 0; // Unicode scalar count
};

/// Recompute line_count/char_count from content.
void refresh_counts(SubmissionFile& file);

struct StudentSubmission {
    std::string submission_id;
    std::vector<SubmissionFile> files;
    std::filesystem::path root;
};

struct AssignmentContext {
    std::string course_description;
    std::string assignment_spec;
    std::vector<std::string> instructor_cwe_ids;
    int target_cwe_count = 3;
    int target_file_count = 2;
};

/// Load a CWE catalog CSV. The header must contain ID (or CWE-ID), Name and
/// Description columns (matched case-insensitively); every other column goes
/// into metadata in column order. Row order is preserved.
/// Errors: MissingColumn, DuplicateId, MalformedRow (column count mismatch).
std::vector<CweEntry> load_cwe_catalog(const std::filesystem::path& csv_path);

struct FileSelection {
    std::vector<SubmissionFile> files;
    bool short_submission = false; // fewer files available than requested
};

/// The k largest files, sorted by (line_count desc, char_count desc, path asc).
FileSelection select_target_files(const StudentSubmission& submission, int k);

/// Uniform sample without replacement of min(n, |allowed|) entries, drawn by
/// Fisher-Yates partial shuffle over mt19937_64 (see rng.hpp for why that
/// generator). Every allowed id must exist in the catalog: UnknownCweId.
std::vector<CweEntry> sample_cwes(const std::vector<CweEntry>& catalog,
                                  const std::vector<std::string>& allowed_ids,
                                  int n, std::uint64_t seed);

/// Walk a directory tree and ingest every source file whose extension maps to
/// a known language (.py/.java/.kt/.js); anything else is skipped and listed
/// in `skipped`. Paths are recorded relative to root, sorted ascending.
StudentSubmission load_submission(const std::filesystem::path& root,
                                  const std::string& submission_id = {},
                                  std::vector<std::string>* skipped = nullptr);

/// Context file is JSON (.json) or the config TOML subset (anything else).
/// Fields: course_description, assignment_spec, instructor_cwe_ids,
/// target_cwe_count, target_file_count.
AssignmentContext load_context(const std::filesystem::path& path);

} // namespace cweseed::corpus
