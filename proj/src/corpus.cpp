// SPDX-License-Identifier: Apache-2.0
#include "cweseed/corpus.hpp"

#include "cweseed/csv.hpp"
#include "cweseed/error.hpp"
#include "cweseed/rng.hpp"
#include "cweseed/tomlmini.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cweseed::corpus {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool is_all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

} // namespace

std::string_view to_string(Language lang) {
    switch (lang) {
    case Language::Python: return "python";
    case Language::Java: return "java";
    case Language::Kotlin: return "kotlin";
    case Language::JavaScript: return "javascript";
    }
    return "python";
}

std::optional<Language> language_from_name(std::string_view name) {
    std::string n = lower(name);
    if (n == "python") return Language::Python;
    if (n == "java") return Language::Java;
    if (n == "kotlin") return Language::Kotlin;
    if (n == "javascript") return Language::JavaScript;
    return std::nullopt;
}

std::optional<Language> language_from_extension(const std::filesystem::path& path) {
    std::string ext = lower(path.extension().string());
    if (ext == ".py") return Language::Python;
    if (ext == ".java") return Language::Java;
    if (ext == ".kt") return Language::Kotlin;
    if (ext == ".js") return Language::JavaScript;
    return std::nullopt;
}

void refresh_counts(SubmissionFile& file) {
    const std::string& s = file.content;
    std::size_t lines = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\n') {
            ++lines;
        }
    }
    if (!s.empty() && s.back() != '\n') {
        ++lines;
    }
    file.line_count = lines;

    std::size_t scalars = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) { // skip UTF-8 continuation bytes
            ++scalars;
        }
    }
    file.char_count = scalars;
}

std::vector<CweEntry> load_cwe_catalog(const std::filesystem::path& csv_path) {
    csv::Table table = csv::read_file(csv_path);
    if (table.header.empty()) {
        throw Error("MissingColumn", "catalog has no header row");
    }

    int id_col = -1, name_col = -1, desc_col = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        std::string h = lower(table.header[i]);
        if (id_col < 0 && (h == "id" || h == "cwe-id" || h == "cwe_id")) {
            id_col = static_cast<int>(i);
        } else if (name_col < 0 && h == "name") {
            name_col = static_cast<int>(i);
        } else if (desc_col < 0 && h == "description") {
            desc_col = static_cast<int>(i);
        }
    }
    if (id_col < 0) throw Error("MissingColumn", "header lacks an ID column");
    if (name_col < 0) throw Error("MissingColumn", "header lacks a Name column");
    if (desc_col < 0) throw Error("MissingColumn", "header lacks a Description column");

    std::vector<CweEntry> entries;
    entries.reserve(table.rows.size());
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw Error("MalformedRow",
                        "row " + std::to_string(r + 2) + " has " +
                            std::to_string(row.size()) + " columns, expected " +
                            std::to_string(table.header.size()));
        }
        CweEntry entry;
        const std::string& raw_id = row[id_col];
        if (is_all_digits(raw_id)) {
            entry.id = "CWE-" + raw_id;
        } else if (raw_id.rfind("CWE-", 0) == 0 && is_all_digits(raw_id.substr(4))) {
            entry.id = raw_id;
        } else {
            throw Error("MalformedRow",
                        "row " + std::to_string(r + 2) + ": bad id '" + raw_id + "'");
        }
        entry.name = row[name_col];
        if (entry.name.empty()) {
            throw Error("MalformedRow",
                        "row " + std::to_string(r + 2) + ": empty name");
        }
        entry.description = row[desc_col];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (static_cast<int>(c) == id_col || static_cast<int>(c) == name_col ||
                static_cast<int>(c) == desc_col) {
                continue;
            }
            entry.metadata.emplace_back(table.header[c], row[c]);
        }
        if (!seen.insert(entry.id).second) {
            throw Error("DuplicateId", entry.id + " appears more than once");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

FileSelection select_target_files(const StudentSubmission& submission, int k) {
    if (k < 1) {
        throw Error("BadArgument", "k must be >= 1");
    }
    std::vector<SubmissionFile> sorted = submission.files;
    std::sort(sorted.begin(), sorted.end(),
              [](const SubmissionFile& a, const SubmissionFile& b) {
                  if (a.line_count != b.line_count) return a.line_count > b.line_count;
                  if (a.char_count != b.char_count) return a.char_count > b.char_count;
                  return a.path < b.path;
              });
    FileSelection out;
    out.short_submission = sorted.size() < static_cast<std::size_t>(k);
    std::size_t take = std::min(sorted.size(), static_cast<std::size_t>(k));
    out.files.assign(sorted.begin(), sorted.begin() + take);
    return out;
}

std::vector<CweEntry> sample_cwes(const std::vector<CweEntry>& catalog,
                                  const std::vector<std::string>& allowed_ids,
                                  int n, std::uint64_t seed) {
    if (n < 1) {
        throw Error("BadArgument", "n must be >= 1");
    }
    std::unordered_map<std::string, const CweEntry*> by_id;
    for (const auto& entry : catalog) {
        by_id.emplace(entry.id, &entry);
    }
    std::vector<const CweEntry*> pool;
    std::set<std::string> seen;
    for (const auto& id : allowed_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw Error("UnknownCweId", id + " is not in the catalog");
        }
        if (seen.insert(id).second) {
            pool.push_back(it->second);
        }
    }

    std::mt19937_64 gen(seed);
    std::size_t take = std::min(pool.size(), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t j = i + rng::bounded(gen, pool.size() - i);
        std::swap(pool[i], pool[j]);
    }
    std::vector<CweEntry> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(*pool[i]);
    }
    return out;
}

StudentSubmission load_submission(const std::filesystem::path& root,
                                  const std::string& submission_id,
                                  std::vector<std::string>* skipped) {
    if (!std::filesystem::is_directory(root)) {
        throw Error("FileNotFound", root.string() + " is not a directory");
    }
    StudentSubmission submission;
    submission.root = root;
    submission.submission_id =
        submission_id.empty() ? root.filename().string() : submission_id;

    for (auto it = std::filesystem::recursive_directory_iterator(root);
         it != std::filesystem::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) {
            continue;
        }
        std::string rel = std::filesystem::relative(it->path(), root).generic_string();
        auto lang = language_from_extension(it->path());
        if (!lang) {
            if (skipped) {
                skipped->push_back(rel);
            }
            continue;
        }
        SubmissionFile file;
        file.path = rel;
        file.language = *lang;
        std::ifstream in(it->path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        file.content = buf.str();
        refresh_counts(file);
        submission.files.push_back(std::move(file));
    }
    std::sort(submission.files.begin(), submission.files.end(),
              [](const SubmissionFile& a, const SubmissionFile& b) {
                  return a.path < b.path;
              });
    if (submission.files.empty()) {
        throw Error("EmptySubmission",
                    "no source files with a recognized extension under " +
                        root.string());
    }
    return submission;
}

AssignmentContext load_context(const std::filesystem::path& path) {
    AssignmentContext ctx;
    if (path.extension() == ".json") {
        std::ifstream in(path);
        if (!in) {
            throw Error("FileNotFound", "cannot open " + path.string());
        }
        nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, true);
        ctx.course_description = doc.value("course_description", "");
        ctx.assignment_spec = doc.value("assignment_spec", "");
        if (doc.contains("instructor_cwe_ids")) {
            for (const auto& id : doc["instructor_cwe_ids"]) {
                ctx.instructor_cwe_ids.push_back(id.get<std::string>());
            }
        }
        ctx.target_cwe_count = doc.value("target_cwe_count", 3);
        ctx.target_file_count = doc.value("target_file_count", 2);
    } else {
        tomlmini::Document doc = tomlmini::read_file(path);
        if (const auto* v = doc.find("", "course_description")) ctx.course_description = v->text;
        if (const auto* v = doc.find("", "assignment_spec")) ctx.assignment_spec = v->text;
        if (const auto* v = doc.find("", "instructor_cwe_ids")) ctx.instructor_cwe_ids = v->items;
        if (const auto* v = doc.find("", "target_cwe_count")) ctx.target_cwe_count = static_cast<int>(v->as_int());
        if (const auto* v = doc.find("", "target_file_count")) ctx.target_file_count = static_cast<int>(v->as_int());
    }
    if (ctx.instructor_cwe_ids.empty()) {
        throw Error("BadContext", "instructor_cwe_ids must be nonempty");
    }
    if (ctx.target_cwe_count < 1 || ctx.target_file_count < 1) {
        throw Error("BadContext", "target counts must be >= 1");
    }
    return ctx;
}

} // namespace cweseed::corpus
