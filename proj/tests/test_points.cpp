// SPDX-License-Identifier: Apache-2.0
#include "cweseed/error.hpp"
#include "cweseed/points.hpp"
#include "cweseed/syntax.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace cweseed;

namespace {

const std::filesystem::path kFixtures = CWESEED_FIXTURE_DIR;

corpus::SubmissionFile make_file(std::string content,
                                 corpus::Language lang = corpus::Language::Python) {
    corpus::SubmissionFile file;
    file.path = lang == corpus::Language::Python ? "app.py" : "app.js";
    file.language = lang;
    file.content = std::move(content);
    corpus::refresh_counts(file);
    return file;
}

std::vector<points::InjectionPoint> discover(const corpus::SubmissionFile& file,
                                             const points::HeuristicConfig& config) {
    auto tree = syntax::parse(file);
    REQUIRE(tree.clean());
    return points::discover_injection_points(tree, file, config);
}

} // namespace

TEST_CASE("unsafe call names produce UnsafeCall points") {
    auto file = make_file("import os\n"
                          "def run(user_input):\n"
                          "    os.system(user_input)\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    REQUIRE(found.size() >= 1);
    bool hit = false;
    for (const auto& p : found) {
        if (p.category == points::Category::UnsafeCall && p.start_line == 3) {
            hit = true;
            CHECK(p.sink_hint == "os.system");
            CHECK(p.snippet == "os.system(user_input)");
        }
    }
    CHECK(hit);
}

TEST_CASE("no calls and no branches means no points") {
    auto file = make_file("x = 1\ny = x + 2\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    CHECK(found.empty());
}

TEST_CASE("branching on raw input is an UncheckedInputBranch") {
    auto file = make_file("while input(\"cmd: \") != \"quit\":\n"
                          "    print(\"looping\")\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    bool hit = false;
    for (const auto& p : found) {
        if (p.category == points::Category::UncheckedInputBranch) {
            hit = true;
            CHECK(p.start_line == 1);
            CHECK(p.sink_hint == "input");
        }
    }
    CHECK(hit);
}

TEST_CASE("source feeding a sink is an UnderValidatedInteraction") {
    // Hand-annotated expectation: the execute() sink on line 5 sits within
    // the window of the request read on line 3.
    auto file = make_file(
        "def handler(request, db):\n"
        "    # concatenated query built from a request parameter\n"
        "    name = request.args.get(\"name\")\n"
        "    q = \"SELECT * FROM users WHERE name = '\" + name + \"'\"\n"
        "    return db.execute(q)\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    bool uvi_on_sink_line = false;
    for (const auto& p : found) {
        if (p.category == points::Category::UnderValidatedInteraction &&
            p.start_line == 5) {
            uvi_on_sink_line = true;
            CHECK(p.sink_hint == "execute");
        }
    }
    CHECK(uvi_on_sink_line);
}

TEST_CASE("javascript handler with template query is annotated") {
    auto file = make_file(
        "function handler(req, res, db) {\n"
        "  const name = req.query.name;\n"
        "  const q = `SELECT * FROM users WHERE name = '${name}'`;\n"
        "  db.query(q);\n"
        "  return res.send('ok');\n"
        "}\n",
        corpus::Language::JavaScript);
    auto found = discover(file, points::HeuristicConfig::defaults());
    bool hit = false;
    for (const auto& p : found) {
        if (p.category == points::Category::UnderValidatedInteraction) {
            hit = true;
        }
    }
    CHECK(hit);
}

TEST_CASE("points are ordered by start line and deduplicated") {
    auto file = make_file("import os\n"
                          "a = input()\n"
                          "os.system(a)\n"
                          "b = input()\n"
                          "os.system(b)\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    REQUIRE(found.size() >= 2);
    for (std::size_t i = 1; i < found.size(); ++i) {
        CHECK(found[i - 1].start_line <= found[i].start_line);
    }
    for (std::size_t i = 1; i < found.size(); ++i) {
        bool same = found[i - 1].category == found[i].category &&
                    found[i - 1].start_line == found[i].start_line &&
                    found[i - 1].sink_hint == found[i].sink_hint;
        CHECK_FALSE(same);
    }
}

TEST_CASE("snippets quote the file text exactly") {
    auto file = make_file("import subprocess\n"
                          "subprocess.call([\"ls\", \"-l\"])\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    for (const auto& p : found) {
        CHECK(file.content.find(p.snippet) != std::string::npos);
    }
}

TEST_CASE("dirty trees are rejected") {
    auto file = make_file("def f(:\n");
    auto tree = syntax::parse(file);
    REQUIRE_FALSE(tree.clean());
    try {
        points::discover_injection_points(tree, file,
                                          points::HeuristicConfig::defaults());
        FAIL("expected DirtyTree");
    } catch (const Error& e) {
        CHECK(e.code() == "DirtyTree");
    }
}

TEST_CASE("discovery is monotone in the unsafe-call list") {
    auto file = make_file("import os\n"
                          "def go(cmd, blob):\n"
                          "    os.system(cmd)\n"
                          "    eval(blob)\n"
                          "    pickle.loads(blob)\n");
    auto base_config = points::HeuristicConfig::defaults();
    auto& list = base_config.languages["python"].unsafe_calls;
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        points::HeuristicConfig small = base_config;
        auto& small_list = small.languages["python"].unsafe_calls;
        small_list.clear();
        for (const auto& entry : list) {
            if (gen() % 2 == 0) {
                small_list.push_back(entry);
            }
        }
        auto small_points = discover(file, small);
        auto full_points = discover(file, base_config);
        for (const auto& p : small_points) {
            bool present = false;
            for (const auto& q : full_points) {
                if (q.category == p.category && q.start_line == p.start_line &&
                    q.sink_hint == p.sink_hint) {
                    present = true;
                }
            }
            CHECK(present);
        }
        CHECK(full_points.size() >= small_points.size());
    }
}

TEST_CASE("heuristic config loads from JSON") {
    auto config = points::HeuristicConfig::load(kFixtures / "heuristics.json");
    REQUIRE(config.languages.count("python") == 1);
    REQUIRE(config.languages.count("javascript") == 1);
    CHECK(config.languages["python"].interaction_window == 5);
    CHECK_FALSE(config.languages["python"].unsafe_calls.empty());
    CHECK(config.for_language(corpus::Language::Python) != nullptr);
    CHECK(config.for_language(corpus::Language::Java) == nullptr);
}

TEST_CASE("describe_points serializes one line per point") {
    auto file = make_file("import os\nos.system(input())\n");
    auto found = discover(file, points::HeuristicConfig::defaults());
    std::string text = points::describe_points(found);
    CHECK(text.find("unsafe_call") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long>(found.size()));
}
