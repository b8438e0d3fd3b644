// SPDX-License-Identifier: Apache-2.0
#include "cweseed/error.hpp"
#include "cweseed/syntax.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
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

syntax::SyntaxTree parse_text(const std::string& text, corpus::Language lang) {
    corpus::SubmissionFile file;
    file.path = "test";
    file.language = lang;
    file.content = text;
    corpus::refresh_counts(file);
    return syntax::parse(file);
}

std::map<std::string, int> kind_counts(const syntax::SyntaxTree& tree) {
    std::map<std::string, int> counts;
    syntax::walk(tree, [&](int, const syntax::Node& node) { counts[node.kind]++; });
    return counts;
}

} // namespace

TEST_CASE("empty file parses to an empty module") {
    auto tree = parse_text("", corpus::Language::Python);
    CHECK(tree.clean());
    REQUIRE(tree.root == 0);
    CHECK(tree.at(0).kind == "module");
    CHECK(tree.at(0).children.empty());
}

TEST_CASE("malformed def records parse errors instead of throwing") {
    auto tree = parse_text("def f(:\n", corpus::Language::Python);
    CHECK_FALSE(tree.clean());
    CHECK_FALSE(tree.parse_errors.empty());
}

TEST_CASE("unsupported languages are rejected") {
    corpus::SubmissionFile file;
    file.path = "Main.java";
    file.language = corpus::Language::Java;
    file.content = "class Main {}";
    try {
        syntax::parse(file);
        FAIL("expected UnsupportedLanguage");
    } catch (const Error& e) {
        CHECK(e.code() == "UnsupportedLanguage");
    }
    CHECK_FALSE(syntax::supported(corpus::Language::Kotlin));
    CHECK(syntax::supported(corpus::Language::Python));
    CHECK(syntax::supported(corpus::Language::JavaScript));
}

TEST_CASE("python fixture node counts match the reference grammar tool") {
    // Reference counts computed with CPython's ast module on this fixture
    // (python3 -c "import ast; ..."): FunctionDef 6, ClassDef 1, If 3
    // (elif clauses count as nested If there), For+While 3, Call 20,
    // Return 6.
    auto tree = parse_text(slurp(kFixtures / "parse" / "clean.py"),
                           corpus::Language::Python);
    REQUIRE(tree.clean());
    auto counts = kind_counts(tree);
    CHECK(counts["function_def"] == 6);
    CHECK(counts["class_def"] == 1);
    CHECK(counts["if_stmt"] + counts["elif_clause"] == 3);
    CHECK(counts["for_stmt"] + counts["while_stmt"] == 3);
    CHECK(counts["call"] == 20);
    CHECK(counts["return_stmt"] == 6);
}

TEST_CASE("python call callees carry dotted names") {
    auto tree = parse_text("import os\n"
                           "def f(x):\n"
                           "    os.system(x)\n"
                           "    return cursor.execute(q).fetchone()\n",
                           corpus::Language::Python);
    REQUIRE(tree.clean());
    std::vector<std::string> callees;
    syntax::walk(tree, [&](int, const syntax::Node& node) {
        if (node.kind == "call") {
            callees.push_back(node.name);
        }
    });
    REQUIRE(callees.size() == 3);
    CHECK(callees[0] == "os.system");
    CHECK(callees[1] == "cursor.execute");
    CHECK(callees[2] == "fetchone");
}

TEST_CASE("python spans nest within parent spans") {
    auto source = slurp(kFixtures / "parse" / "clean.py");
    auto tree = parse_text(source, corpus::Language::Python);
    syntax::walk(tree, [&](int index, const syntax::Node& node) {
        for (int child : node.children) {
            const auto& c = tree.at(child);
            CHECK(c.span.begin >= node.span.begin);
            CHECK(c.span.end <= node.span.end);
        }
        CHECK(node.span.end <= source.size());
        (void)index;
    });
}

TEST_CASE("python elif and else attach as clause nodes") {
    auto tree = parse_text("if a:\n    x = 1\nelif b:\n    x = 2\nelse:\n    x = 3\n",
                           corpus::Language::Python);
    REQUIRE(tree.clean());
    auto counts = kind_counts(tree);
    CHECK(counts["if_stmt"] == 1);
    CHECK(counts["elif_clause"] == 1);
    CHECK(counts["else_clause"] == 1);
    CHECK(counts["assign_stmt"] == 3);
}

TEST_CASE("python prose preamble is a syntax error") {
    auto result = syntax::validate_syntax(
        "Here is the injected code with the flaw you asked about:\n"
        "def f():\n    return 1\n",
        corpus::Language::Python);
    CHECK_FALSE(result.ok);
    CHECK_FALSE(result.diagnostics.empty());
}

TEST_CASE("python unbalanced brace appended breaks validation") {
    std::string good = "def f():\n    return [1, 2]\n";
    CHECK(syntax::validate_syntax(good, corpus::Language::Python).ok);
    CHECK_FALSE(syntax::validate_syntax(good + ")\n", corpus::Language::Python).ok);
    CHECK_FALSE(syntax::validate_syntax(good + "x = (1\n", corpus::Language::Python).ok);
}

TEST_CASE("python indentation problems are reported") {
    auto bad_dedent = parse_text("def f():\n        x = 1\n      y = 2\n",
                                 corpus::Language::Python);
    CHECK_FALSE(bad_dedent.clean());

    auto missing_block = parse_text("def f():\n", corpus::Language::Python);
    CHECK_FALSE(missing_block.clean());

    auto stray_indent = parse_text("x = 1\n    y = 2\n", corpus::Language::Python);
    CHECK_FALSE(stray_indent.clean());
}

TEST_CASE("python strings and comments do not confuse the lexer") {
    auto tree = parse_text("s = \"not a # comment ( or { \"\n"
                           "t = 'single with \\' escape'\n"
                           "u = '''triple\nwith (unbalanced in string\n'''\n"
                           "# real comment (unbalanced\nv = 1\n",
                           corpus::Language::Python);
    CHECK(tree.clean());
}

TEST_CASE("python soft keywords do not false-positive") {
    CHECK(syntax::validate_syntax("match = 1\nresult = match + 1\n",
                                  corpus::Language::Python)
              .ok);
    CHECK(syntax::validate_syntax("m = re.match(pattern, s)\n",
                                  corpus::Language::Python)
              .ok);
    CHECK(syntax::validate_syntax("match command:\n    case 1:\n        pass\n",
                                  corpus::Language::Python)
              .ok);
}

TEST_CASE("validate_syntax ok implies a clean fresh parse") {
    const char* sources[] = {
        "def f():\n    return 1\n",
        "x = [1, 2, 3]\n",
        "Here is prose\n",
        "def g(:\n",
    };
    for (const char* s : sources) {
        auto result = syntax::validate_syntax(s, corpus::Language::Python);
        auto tree = parse_text(s, corpus::Language::Python);
        CHECK(result.ok == tree.parse_errors.empty());
    }
}

TEST_CASE("diagnostics format as path:line:col: message") {
    auto result = syntax::validate_syntax("x = 1\ny = (\n", corpus::Language::Python);
    REQUIRE_FALSE(result.ok);
    std::string text = syntax::format_diagnostics("app.py", result);
    CHECK(text.find("app.py:2:5: ") != std::string::npos);
}

TEST_CASE("javascript structure and calls") {
    auto tree = parse_text(
        "const db = require('./db');\n"
        "function handler(req, res) {\n"
        "  const name = req.query.name;\n"
        "  if (name) {\n"
        "    db.query(`SELECT * FROM users WHERE name = '${name}'`);\n"
        "  }\n"
        "  return res.send('ok');\n"
        "}\n"
        "class Store {\n"
        "  get(key) { return this.map.get(key); }\n"
        "}\n",
        corpus::Language::JavaScript);
    REQUIRE(tree.clean());
    auto counts = kind_counts(tree);
    CHECK(counts["function_def"] == 2); // handler + the Store.get method
    CHECK(counts["class_def"] == 1);
    CHECK(counts["if_stmt"] == 1);
    CHECK(counts["return_stmt"] == 2);
    std::vector<std::string> callees;
    syntax::walk(tree, [&](int, const syntax::Node& node) {
        if (node.kind == "call") {
            callees.push_back(node.name);
        }
    });
    // require, db.query, res.send, this.map.get
    CHECK(callees.size() == 4);
    bool found_query = false;
    for (const auto& c : callees) {
        if (c == "db.query") {
            found_query = true;
        }
    }
    CHECK(found_query);
}

TEST_CASE("javascript prose preamble is a syntax error") {
    auto result = syntax::validate_syntax(
        "Sure, here is the modified file:\nfunction f() { return 1; }\n",
        corpus::Language::JavaScript);
    CHECK_FALSE(result.ok);
}

TEST_CASE("javascript asi does not false-positive across lines") {
    CHECK(syntax::validate_syntax("const x = foo\nconsole.log(x)\n",
                                  corpus::Language::JavaScript)
              .ok);
}

TEST_CASE("javascript unbalanced and unterminated constructs") {
    CHECK_FALSE(syntax::validate_syntax("function f() { return 1;\n",
                                        corpus::Language::JavaScript)
                    .ok);
    CHECK_FALSE(syntax::validate_syntax("const s = 'abc\n",
                                        corpus::Language::JavaScript)
                    .ok);
    CHECK_FALSE(syntax::validate_syntax("const t = `abc ${1 + 2\n",
                                        corpus::Language::JavaScript)
                    .ok);
    CHECK_FALSE(syntax::validate_syntax("/* never closed\nconst x = 1;\n",
                                        corpus::Language::JavaScript)
                    .ok);
}

TEST_CASE("javascript regex literals are opaque") {
    CHECK(syntax::validate_syntax(
              "const re = /ab+c[)(]/g;\nconst ratio = a / b / c;\n",
              corpus::Language::JavaScript)
              .ok);
}

TEST_CASE("parsers never throw on mutated fixtures") {
    std::string py = slurp(kFixtures / "parse" / "clean.py");
    std::string js = "function f(a) { if (a) { return g(a); } }\n"
                     "const h = (x) => x * 2;\n";
    std::mt19937_64 gen(2025);
    for (int i = 0; i < 2000; ++i) {
        std::string s = i % 2 == 0 ? py : js;
        int mutations = 1 + static_cast<int>(gen() % 4);
        for (int m = 0; m < mutations; ++m) {
            std::size_t pos = gen() % s.size();
            switch (gen() % 3) {
            case 0: s[pos] = static_cast<char>(gen() % 256); break;
            case 1: s.insert(pos, 1, static_cast<char>(32 + gen() % 95)); break;
            default: s.erase(pos, 1); break;
            }
        }
        auto lang = i % 2 == 0 ? corpus::Language::Python : corpus::Language::JavaScript;
        CHECK_NOTHROW(parse_text(s, lang));
    }
}
