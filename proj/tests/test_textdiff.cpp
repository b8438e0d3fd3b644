// SPDX-License-Identifier: Apache-2.0
#include "cweseed/textdiff.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace cweseed::textdiff;

namespace {

std::string random_doc(std::mt19937_64& gen, int max_lines) {
    static const char* kLines[] = {
        "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    };
    std::string out;
    int lines = static_cast<int>(gen() % (max_lines + 1));
    for (int i = 0; i < lines; ++i) {
        out += kLines[gen() % 8];
        out += '\n';
    }
    if (lines > 0 && gen() % 4 == 0) {
        out.pop_back(); // sometimes drop the trailing newline
    }
    return out;
}

} // namespace

TEST_CASE("equal texts diff to nothing") {
    CHECK(line_diff("a\nb\nc\n", "a\nb\nc\n").empty());
    CHECK(line_diff("", "").empty());
}

TEST_CASE("single replaced line yields a single range") {
    std::string original = "l1\nl2\nl3\nl4\nl5\nl6\n";
    std::string modified = "l1\nl2\nl3\nl4\nCHANGED\nl6\n";
    auto edits = line_diff(original, modified);
    REQUIRE(edits.size() == 1);
    CHECK(edits[0].original.first == 5);
    CHECK(edits[0].original.last == 5);
    CHECK(edits[0].modified.first == 5);
    CHECK(edits[0].modified.last == 5);
    CHECK(apply_edits(original, edits) == modified);

    auto regions = changed_regions(edits, 6);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].first == 5);
    CHECK(regions[0].last == 5);
}

TEST_CASE("insertion and deletion ranges") {
    std::string original = "a\nb\nc\n";

    auto ins = line_diff(original, "a\nb\nX\nY\nc\n");
    REQUIRE(ins.size() == 1);
    CHECK(ins[0].original.first == 3);
    CHECK(ins[0].original.last == 2); // pure insertion
    CHECK(ins[0].modified.first == 3);
    CHECK(ins[0].modified.last == 4);
    CHECK(apply_edits(original, ins) == "a\nb\nX\nY\nc\n");

    auto del = line_diff(original, "a\nc\n");
    REQUIRE(del.size() == 1);
    CHECK(del[0].original.first == 2);
    CHECK(del[0].original.last == 2);
    CHECK(del[0].modified.first == 2);
    CHECK(del[0].modified.last == 1); // pure deletion
    CHECK(apply_edits(original, del) == "a\nc\n");

    // Deletion markers point at the nearest surviving line.
    auto regions = changed_regions(del, 2);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].first == 1);
    CHECK(regions[0].last == 1);
}

TEST_CASE("trailing newline changes are detected") {
    auto edits = line_diff("a\nb", "a\nb\n");
    CHECK_FALSE(edits.empty());
    CHECK(apply_edits("a\nb", edits) == "a\nb\n");

    auto edits2 = line_diff("a\nb\n", "a\nb");
    CHECK_FALSE(edits2.empty());
    CHECK(apply_edits("a\nb\n", edits2) == "a\nb");
}

TEST_CASE("reconstruction oracle over random document pairs") {
    std::mt19937_64 gen(77);
    for (int i = 0; i < 400; ++i) {
        std::string a = random_doc(gen, 40);
        std::string b = random_doc(gen, 40);
        auto edits = line_diff(a, b);
        CHECK(apply_edits(a, edits) == b);
        if (a == b) {
            CHECK(edits.empty());
        } else {
            CHECK_FALSE(edits.empty());
        }
    }
}

TEST_CASE("reconstruction on larger mutated documents") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 50; ++i) {
        std::string a;
        for (int l = 0; l < 200; ++l) {
            a += "line_" + std::to_string(l) + "_" + std::to_string(gen() % 10) + "\n";
        }
        // Mutate a copy: replace, insert and delete a few random lines.
        auto lines = split_lines(a);
        for (int m = 0; m < 8; ++m) {
            std::size_t pos = gen() % lines.size();
            switch (gen() % 3) {
            case 0: lines[pos] = "mutated_" + std::to_string(gen() % 100); break;
            case 1: lines.insert(lines.begin() + pos, "inserted"); break;
            default: lines.erase(lines.begin() + pos); break;
            }
        }
        std::string b;
        for (const auto& l : lines) {
            b += l;
            b += '\n';
        }
        auto edits = line_diff(a, b);
        CHECK(apply_edits(a, edits) == b);
    }
}

TEST_CASE("changed_regions merges adjacent ranges") {
    std::vector<LineEdit> edits;
    LineEdit e1;
    e1.modified = {3, 4};
    LineEdit e2;
    e2.modified = {5, 6};
    edits.push_back(e1);
    edits.push_back(e2);
    auto regions = changed_regions(edits, 10);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].first == 3);
    CHECK(regions[0].last == 6);
}
