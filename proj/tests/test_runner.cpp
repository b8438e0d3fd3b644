// SPDX-License-Identifier: Apache-2.0
#include "cweseed/error.hpp"
#include "cweseed/runner.hpp"

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cweseed;

namespace {

const std::filesystem::path kFixtures = CWESEED_FIXTURE_DIR;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("normalize_output trims trailing whitespace per line") {
    CHECK(runner::normalize_output("a  \nb\t\nc") == "a\nb\nc");
    CHECK(runner::normalize_output("x\r\ny\r\n") == "x\ny\n");
    CHECK(runner::normalize_output("") == "");
}

TEST_CASE("smoke suite loads from fixture JSON") {
    auto suite = runner::load_smoke_suite(kFixtures / "smoke_suite.json");
    CHECK(suite.suite_id == "inventory-smoke");
    REQUIRE(suite.cases.size() == 3);
    CHECK(suite.cases[0].name == "add-and-get");
    CHECK(suite.cases[0].must_pass);
    CHECK_FALSE(suite.cases[2].must_pass);
    CHECK(suite.cases[0].command.find("{{file}}") != std::string::npos);
}

TEST_CASE("run_case captures stdout, exit code and feeds stdin") {
    runner::ProcessRunner proc({.workspace = {}, .timeout = std::chrono::seconds(10)});

    runner::SmokeCase echo{"echo", "echo hello", "", true};
    auto out = proc.run_case(echo, "code.txt", "ignored");
    CHECK(out.exit_code == 0);
    CHECK(out.stdout_text == "hello\n");
    CHECK_FALSE(out.timed_out);

    runner::SmokeCase cat{"cat", "cat", "line one\nline two\n", true};
    auto echoed = proc.run_case(cat, "code.txt", "ignored");
    CHECK(echoed.exit_code == 0);
    CHECK(echoed.stdout_text == "line one\nline two\n");

    runner::SmokeCase fail{"fail", "exit 3", "", true};
    CHECK(proc.run_case(fail, "code.txt", "").exit_code == 3);
}

TEST_CASE("run_case substitutes the file placeholder") {
    runner::ProcessRunner proc({.workspace = {}, .timeout = std::chrono::seconds(10)});
    runner::SmokeCase cat_file{"cat-file", "cat {{file}}", "", true};
    auto out = proc.run_case(cat_file, "snippet.py", "print('hi')\n");
    CHECK(out.exit_code == 0);
    CHECK(out.stdout_text == "print('hi')\n");
}

TEST_CASE("run_case kills processes at the timeout") {
    runner::ProcessRunner proc(
        {.workspace = {}, .timeout = std::chrono::milliseconds(300)});
    runner::SmokeCase sleeper{"sleep", "sleep 5", "", true};
    auto start = std::chrono::steady_clock::now();
    auto out = proc.run_case(sleeper, "code.txt", "");
    auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(out.timed_out);
    CHECK(elapsed < std::chrono::seconds(3));
}

TEST_CASE("behavioral_check: empty suite is SyntaxOnly") {
    corpus::SubmissionFile file;
    file.path = "inventory.py";
    file.content = "print('x')\n";
    runner::SmokeSuite empty;
    empty.suite_id = "empty";
    runner::ProcessRunner proc({.workspace = {}, .timeout = std::chrono::seconds(10)});
    auto report = runner::behavioral_check(file, file.content, empty, proc);
    CHECK(report.verdict == runner::Verdict::SyntaxOnly);
    CHECK(report.cases.empty());
}

TEST_CASE("behavioral_check: identical program is Equivalent") {
    corpus::SubmissionFile file;
    file.path = "inventory.py";
    file.content = slurp(kFixtures / "submission" / "inventory.py");
    auto suite = runner::load_smoke_suite(kFixtures / "smoke_suite.json");
    runner::ProcessRunner proc({.workspace = kFixtures / "submission",
                                .timeout = std::chrono::seconds(10)});
    auto report = runner::behavioral_check(file, file.content, suite, proc);
    CHECK(report.verdict == runner::Verdict::Equivalent);
    REQUIRE(report.cases.size() == 3);
    for (const auto& c : report.cases) {
        CHECK(c.agreed);
        CHECK(c.original.exit_code == 0);
    }
    // the add-and-get case sees the inserted row
    CHECK(report.cases[0].original.stdout_text.find("bolts 12") != std::string::npos);
}

TEST_CASE("behavioral_check: mutant breaking a must-pass case Diverges") {
    corpus::SubmissionFile file;
    file.path = "inventory.py";
    file.content = slurp(kFixtures / "submission" / "inventory.py");

    // Mutant deletes an output statement: lookups report nothing.
    std::string mutant = file.content;
    auto pos = mutant.find("return item[\"name\"] + \" \" + str(item[\"qty\"])");
    REQUIRE(pos != std::string::npos);
    mutant.replace(pos, std::string("return item[\"name\"] + \" \" + str(item[\"qty\"])").size(),
                   "return \"\"");

    auto suite = runner::load_smoke_suite(kFixtures / "smoke_suite.json");
    runner::ProcessRunner proc({.workspace = kFixtures / "submission",
                                .timeout = std::chrono::seconds(10)});
    auto report = runner::behavioral_check(file, mutant, suite, proc);
    CHECK(report.verdict == runner::Verdict::Diverged);
    CHECK_FALSE(report.cases[0].agreed); // add-and-get lost its output line
    CHECK(report.cases[1].agreed);       // list-empty unaffected
}

TEST_CASE("behavioral_check is reflexive for an arbitrary suite") {
    corpus::SubmissionFile file;
    file.path = "report.py";
    file.content = slurp(kFixtures / "submission" / "report.py");
    auto suite = runner::load_smoke_suite(kFixtures / "smoke_suite.json");
    runner::ProcessRunner proc({.workspace = kFixtures / "submission",
                                .timeout = std::chrono::seconds(10)});
    auto report = runner::behavioral_check(file, file.content, suite, proc);
    CHECK(report.verdict == runner::Verdict::Equivalent);
}
