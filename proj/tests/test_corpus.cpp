// SPDX-License-Identifier: Apache-2.0
#include "cweseed/corpus.hpp"
#include "cweseed/csv.hpp"
#include "cweseed/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

using namespace cweseed;

namespace {

const std::filesystem::path kFixtures = CWESEED_FIXTURE_DIR;

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

} // namespace

TEST_CASE("catalog with header only is empty") {
    auto path = write_temp("cweseed_empty.csv", "CWE-ID,Name,Description\n");
    auto entries = corpus::load_cwe_catalog(path);
    std::filesystem::remove(path);
    CHECK(entries.empty());
}

TEST_CASE("catalog rows map ID/Name/Description and keep other columns") {
    auto path = write_temp(
        "cweseed_small.csv",
        "CWE-ID,Name,Weakness Abstraction,Description\n"
        "89,\"Improper Neutralization of Special Elements used in an SQL Command "
        "('SQL Injection')\",Base,\"The product constructs all or part of an SQL "
        "command, improperly.\"\n"
        "79,Cross-site Scripting,Base,Output is not neutralized.\n");
    auto entries = corpus::load_cwe_catalog(path);
    std::filesystem::remove(path);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].id == "CWE-89");
    CHECK(entries[0].name.find("SQL Injection") != std::string::npos);
    CHECK(entries[0].description.find("improperly") != std::string::npos);
    REQUIRE(entries[0].metadata.size() == 1);
    CHECK(entries[0].metadata[0].first == "Weakness Abstraction");
    CHECK(entries[0].metadata[0].second == "Base");
    CHECK(entries[1].id == "CWE-79");
}

TEST_CASE("catalog rejects duplicate ids") {
    auto path = write_temp("cweseed_dup.csv",
                           "ID,Name,Description\n89,A,x\n89,B,y\n");
    try {
        corpus::load_cwe_catalog(path);
        FAIL("expected DuplicateId");
    } catch (const Error& e) {
        CHECK(e.code() == "DuplicateId");
    }
    std::filesystem::remove(path);
}

TEST_CASE("catalog rejects missing required columns") {
    auto path = write_temp("cweseed_nocol.csv", "ID,Title,Description\n1,A,x\n");
    try {
        corpus::load_cwe_catalog(path);
        FAIL("expected MissingColumn");
    } catch (const Error& e) {
        CHECK(e.code() == "MissingColumn");
    }
    std::filesystem::remove(path);
}

TEST_CASE("catalog rejects rows with mismatched column counts") {
    auto path = write_temp("cweseed_badrow.csv",
                           "ID,Name,Description\n1,OnlyName\n");
    try {
        corpus::load_cwe_catalog(path);
        FAIL("expected MalformedRow");
    } catch (const Error& e) {
        CHECK(e.code() == "MalformedRow");
    }
    std::filesystem::remove(path);
}

TEST_CASE("the bundled catalog export loads cleanly") {
    auto entries = corpus::load_cwe_catalog(kFixtures / "cwe_catalog.csv");
    CHECK(entries.size() >= 900);
    std::set<std::string> ids;
    const corpus::CweEntry* sqli = nullptr;
    for (const auto& e : entries) {
        CHECK(ids.insert(e.id).second);
        CHECK_FALSE(e.name.empty());
        if (e.id == "CWE-89") {
            sqli = &e;
        }
    }
    REQUIRE(sqli != nullptr);
    CHECK(sqli->name.find("SQL Injection") != std::string::npos);
}

TEST_CASE("catalog round-trips through CSV serialization") {
    auto entries = corpus::load_cwe_catalog(kFixtures / "cwe_catalog.csv");
    csv::Table table;
    table.header = {"CWE-ID", "Name", "Description"};
    for (const auto& e : entries) {
        table.rows.push_back({e.id.substr(4), e.name, e.description});
    }
    auto path = write_temp("cweseed_roundtrip.csv", csv::write(table));
    auto again = corpus::load_cwe_catalog(path);
    std::filesystem::remove(path);
    REQUIRE(again.size() == entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CHECK(again[i].id == entries[i].id);
        CHECK(again[i].name == entries[i].name);
        CHECK(again[i].description == entries[i].description);
    }
}

namespace {

corpus::SubmissionFile make_file(std::string path, std::size_t lines, std::size_t chars) {
    corpus::SubmissionFile f;
    f.path = std::move(path);
    f.language = corpus::Language::Python;
    f.line_count = lines;
    f.char_count = chars;
    return f;
}

} // namespace

TEST_CASE("select_target_files sorts by lines, then chars, then path") {
    corpus::StudentSubmission sub;
    sub.submission_id = "s1";
    sub.files = {make_file("a", 100, 2000), make_file("b", 50, 9000),
                 make_file("c", 100, 1500)};
    auto sel = corpus::select_target_files(sub, 2);
    REQUIRE(sel.files.size() == 2);
    CHECK(sel.files[0].path == "a");
    CHECK(sel.files[1].path == "c");
    CHECK_FALSE(sel.short_submission);
}

TEST_CASE("select_target_files clamps and flags short submissions") {
    corpus::StudentSubmission sub;
    sub.submission_id = "s1";
    sub.files = {make_file("only", 10, 100)};
    auto sel = corpus::select_target_files(sub, 2);
    REQUIRE(sel.files.size() == 1);
    CHECK(sel.files[0].path == "only");
    CHECK(sel.short_submission);
}

TEST_CASE("select_target_files breaks full ties by path") {
    corpus::StudentSubmission sub;
    sub.submission_id = "s1";
    sub.files = {make_file("z", 10, 100), make_file("m", 10, 100)};
    auto sel = corpus::select_target_files(sub, 1);
    REQUIRE(sel.files.size() == 1);
    CHECK(sel.files[0].path == "m");
}

TEST_CASE("selection is stable under input reordering") {
    corpus::StudentSubmission sub;
    sub.submission_id = "s1";
    sub.files = {make_file("a", 5, 10), make_file("b", 9, 2),
                 make_file("c", 9, 4), make_file("d", 1, 99)};
    auto first = corpus::select_target_files(sub, 3);
    std::reverse(sub.files.begin(), sub.files.end());
    auto second = corpus::select_target_files(sub, 3);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        CHECK(first.files[i].path == second.files[i].path);
    }
    // Prefix property: top-2 is a prefix of top-3.
    auto top2 = corpus::select_target_files(sub, 2);
    CHECK(top2.files[0].path == first.files[0].path);
    CHECK(top2.files[1].path == first.files[1].path);
}

namespace {

std::vector<corpus::CweEntry> tiny_catalog() {
    std::vector<corpus::CweEntry> catalog;
    for (int id : {20, 77, 79, 89, 502}) {
        corpus::CweEntry e;
        e.id = "CWE-" + std::to_string(id);
        e.name = "Entry " + std::to_string(id);
        catalog.push_back(e);
    }
    return catalog;
}

} // namespace

TEST_CASE("sample_cwes clamps to the allowed pool") {
    auto catalog = tiny_catalog();
    auto picked = corpus::sample_cwes(catalog, {"CWE-89"}, 3, 1);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0].id == "CWE-89");
}

TEST_CASE("sample_cwes is deterministic per seed") {
    auto catalog = tiny_catalog();
    std::vector<std::string> allowed{"CWE-20", "CWE-77", "CWE-79", "CWE-89", "CWE-502"};
    auto a = corpus::sample_cwes(catalog, allowed, 3, 42);
    auto b = corpus::sample_cwes(catalog, allowed, 3, 42);
    REQUIRE(a.size() == 3);
    REQUIRE(b.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
    }
    auto c = corpus::sample_cwes(catalog, allowed, 3, 43);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        differs = differs || a[i].id != c[i].id;
    }
    CHECK(differs); // overwhelmingly likely across adjacent seeds on this pool
}

TEST_CASE("sample_cwes golden draw for seed 42") {
    // Frozen from the first run of the seeded generator on this pool.
    auto catalog = tiny_catalog();
    std::vector<std::string> allowed{"CWE-20", "CWE-77", "CWE-79", "CWE-89", "CWE-502"};
    auto picked = corpus::sample_cwes(catalog, allowed, 3, 42);
    REQUIRE(picked.size() == 3);
    CHECK(picked[0].id == "CWE-77");
    CHECK(picked[1].id == "CWE-20");
    CHECK(picked[2].id == "CWE-89");
}

TEST_CASE("sample_cwes rejects unknown ids") {
    auto catalog = tiny_catalog();
    try {
        corpus::sample_cwes(catalog, {"CWE-9999"}, 1, 0);
        FAIL("expected UnknownCweId");
    } catch (const Error& e) {
        CHECK(e.code() == "UnknownCweId");
    }
}

TEST_CASE("sample_cwes draws uniformly over many seeds") {
    auto catalog = tiny_catalog();
    std::vector<std::string> allowed{"CWE-20", "CWE-77", "CWE-79", "CWE-89", "CWE-502"};
    const int draws = 10000;
    const int n = 3;
    std::map<std::string, int> counts;
    for (int seed = 0; seed < draws; ++seed) {
        for (const auto& e : corpus::sample_cwes(catalog, allowed, n, seed)) {
            counts[e.id]++;
        }
    }
    // Each id appears with probability n/|allowed| = 0.6 per draw.
    const double p = static_cast<double>(n) / allowed.size();
    const double sigma = std::sqrt(draws * p * (1 - p));
    for (const auto& id : allowed) {
        CHECK(std::abs(counts[id] - draws * p) <= 3.0 * sigma);
    }
}

TEST_CASE("line and scalar counts") {
    corpus::SubmissionFile f;
    f.content = "one\ntwo\nthree";
    corpus::refresh_counts(f);
    CHECK(f.line_count == 3);
    CHECK(f.char_count == 13);

    f.content = "one\ntwo\n";
    corpus::refresh_counts(f);
    CHECK(f.line_count == 2);

    f.content = "";
    corpus::refresh_counts(f);
    CHECK(f.line_count == 0);
    CHECK(f.char_count == 0);

    f.content = "caf\xc3\xa9\n"; // 'café' is 4 scalars + newline
    corpus::refresh_counts(f);
    CHECK(f.char_count == 5);
    CHECK(f.line_count == 1);
}

TEST_CASE("language detection by extension") {
    CHECK(corpus::language_from_extension("a/b/app.py") == corpus::Language::Python);
    CHECK(corpus::language_from_extension("Main.java") == corpus::Language::Java);
    CHECK(corpus::language_from_extension("x.kt") == corpus::Language::Kotlin);
    CHECK(corpus::language_from_extension("ui.js") == corpus::Language::JavaScript);
    CHECK_FALSE(corpus::language_from_extension("notes.txt").has_value());
    CHECK_FALSE(corpus::language_from_extension("Makefile").has_value());
}

TEST_CASE("submission loading skips unknown extensions with a warning list") {
    auto root = std::filesystem::temp_directory_path() / "cweseed_sub";
    std::filesystem::create_directories(root / "lib");
    std::ofstream(root / "main.py") << "print('hello')\n";
    std::ofstream(root / "lib" / "util.js") << "console.log('hi');\n";
    std::ofstream(root / "README.md") << "# readme\n";

    std::vector<std::string> skipped;
    auto sub = corpus::load_submission(root, "student-1", &skipped);
    std::filesystem::remove_all(root);

    REQUIRE(sub.files.size() == 2);
    CHECK(sub.files[0].path == "lib/util.js");
    CHECK(sub.files[1].path == "main.py");
    CHECK(sub.submission_id == "student-1");
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0] == "README.md");
}

TEST_CASE("context loads from TOML subset and JSON") {
    auto toml_path = write_temp("cweseed_ctx.toml",
                                "course_description = \"Secure coding\"\n"
                                "assignment_spec = \"Build an inventory CLI\"\n"
                                "instructor_cwe_ids = [\"CWE-89\", \"CWE-78\"]\n"
                                "target_cwe_count = 3\n");
    auto ctx = corpus::load_context(toml_path);
    std::filesystem::remove(toml_path);
    CHECK(ctx.course_description == "Secure coding");
    CHECK(ctx.instructor_cwe_ids.size() == 2);
    CHECK(ctx.target_cwe_count == 3);
    CHECK(ctx.target_file_count == 2); // default

    auto json_path = write_temp("cweseed_ctx.json",
                                R"({"course_description":"DB systems",
                                    "assignment_spec":"Final project",
                                    "instructor_cwe_ids":["CWE-89"],
                                    "target_file_count":1})");
    auto jctx = corpus::load_context(json_path);
    std::filesystem::remove(json_path);
    CHECK(jctx.course_description == "DB systems");
    CHECK(jctx.target_file_count == 1);
    CHECK(jctx.target_cwe_count == 3); // default
}

TEST_CASE("context requires a nonempty CWE list") {
    auto path = write_temp("cweseed_ctx_bad.toml", "course_description = \"x\"\n");
    try {
        corpus::load_context(path);
        FAIL("expected BadContext");
    } catch (const Error& e) {
        CHECK(e.code() == "BadContext");
    }
    std::filesystem::remove(path);
}
