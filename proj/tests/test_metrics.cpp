// SPDX-License-Identifier: Apache-2.0
#include "cweseed/embedding.hpp"
#include "cweseed/error.hpp"
#include "cweseed/gestalt.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace cweseed;

namespace {

std::string random_text(std::mt19937_64& gen, std::size_t max_len,
                        std::string_view alphabet) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<std::size_t> chr_dist(0, alphabet.size() - 1);
    std::string out;
    std::size_t len = len_dist(gen);
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(alphabet[chr_dist(gen)]);
    }
    return out;
}

} // namespace

TEST_CASE("similarity identical and disjoint strings") {
    CHECK(metrics::similarity("abc", "abc") == doctest::Approx(1.0));
    CHECK(metrics::similarity("abc", "xyz") == doctest::Approx(0.0));
    CHECK(metrics::similarity("", "") == doctest::Approx(1.0));
    CHECK(metrics::similarity("", "x") == doctest::Approx(0.0));
}

TEST_CASE("similarity matches the published gestalt example") {
    double r = metrics::similarity("WIKIMEDIA", "WIKIMANIA");
    CHECK(r == doctest::Approx(14.0 / 18.0).epsilon(1e-12));
}

TEST_CASE("similarity agrees with reference sequence-matcher outputs") {
    // Values computed with a reference gestalt sequence matcher
    // (python difflib.SequenceMatcher, autojunk disabled).
    CHECK(metrics::similarity("abcabba", "cbabac") ==
          doctest::Approx(0.46153846153846156).epsilon(1e-12));
    CHECK(metrics::similarity("aaaa", "aa") ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(metrics::similarity("the quick brown fox", "quick brownish fox jumps") ==
          doctest::Approx(0.6976744186046512).epsilon(1e-12));
    CHECK(metrics::similarity(" \tabb\nacab\t\tbcb\tabca",
                              "\taca d\t bd bc\nbbace\t\nee\ndc cbde\nedbb") ==
          doctest::Approx(0.35714285714285715).epsilon(1e-12));
    CHECK(metrics::similarity("abc\t d\n\nebbeeeedb b\nde ",
                              "ac\n adbd\n \nc\nccc\tcce\naadedc\ne\n\nbc") ==
          doctest::Approx(0.10714285714285714).epsilon(1e-12));
}

TEST_CASE("longest_match picks the earliest longest block") {
    auto blk = metrics::longest_match("xxabcxx", "yyabcars", 0, 7, 0, 8);
    CHECK(blk.a_start == 2);
    CHECK(blk.b_start == 2);
    CHECK(blk.length == 3);

    // Two blocks of equal length: "ab" at a=0 and "cd" at a=2; earliest in a wins.
    auto tie = metrics::longest_match("abcd", "cdab", 0, 4, 0, 4);
    CHECK(tie.a_start == 0);
    CHECK(tie.b_start == 2);
    CHECK(tie.length == 2);
}

TEST_CASE("similarity equals the DP oracle on random pairs") {
    std::mt19937_64 gen(1234);
    const std::string alphabet = "abcdef ()\n\t{};=+";
    for (int i = 0; i < 500; ++i) {
        std::string a = random_text(gen, 120, alphabet);
        std::string b = random_text(gen, 120, alphabet);
        // The oracle is order-dependent; feed it the same canonical order
        // similarity() uses internally.
        const std::string& lo = a <= b ? a : b;
        const std::string& hi = a <= b ? b : a;
        double got = metrics::similarity(a, b);
        double want = oracles::gestalt_ratio(lo, hi);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("similarity is symmetric and bounded") {
    std::mt19937_64 gen(99);
    const std::string alphabet = "abXY 01\n";
    for (int i = 0; i < 1000; ++i) {
        std::string a = random_text(gen, 80, alphabet);
        std::string b = random_text(gen, 80, alphabet);
        double ab = metrics::similarity(a, b);
        double ba = metrics::similarity(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(metrics::similarity(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("term-frequency embedder matches the hand-computed cosine") {
    metrics::TokenFrequencyEmbedder embedder;
    // TF vectors (2,1) and (1,2): cosine 4/5, drift 0.2.
    CHECK(metrics::semantic_drift("a a b", "a b b", embedder) ==
          doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("semantic drift edge cases") {
    metrics::TokenFrequencyEmbedder embedder;
    CHECK(metrics::semantic_drift("def f(x): return x", "def f(x): return x",
                                  embedder) == doctest::Approx(0.0));
    // Token-disjoint documents embed to orthogonal vectors.
    CHECK(metrics::semantic_drift("alpha beta gamma", "delta epsilon zeta",
                                  embedder) == doctest::Approx(1.0));
    // Zero vector on one side only.
    CHECK(metrics::semantic_drift("", "alpha", embedder) == doctest::Approx(1.0));
    CHECK(metrics::semantic_drift("", "", embedder) == doctest::Approx(0.0));
    // Punctuation-only text has no tokens.
    CHECK(metrics::semantic_drift("(((", ")))", embedder) == doctest::Approx(0.0));
}

TEST_CASE("embedder tokenization is case-insensitive and identifier-based") {
    metrics::TokenFrequencyEmbedder embedder;
    CHECK(metrics::semantic_drift("Foo_Bar1 baz", "foo_bar1 BAZ", embedder) ==
          doctest::Approx(0.0));
}

TEST_CASE("drift is symmetric and bounded on random token soup") {
    metrics::TokenFrequencyEmbedder embedder;
    std::mt19937_64 gen(4321);
    const std::string alphabet = "ab c_1;(";
    for (int i = 0; i < 500; ++i) {
        std::string a = random_text(gen, 60, alphabet);
        std::string b = random_text(gen, 60, alphabet);
        double ab = metrics::semantic_drift(a, b, embedder);
        CHECK(ab == doctest::Approx(metrics::semantic_drift(b, a, embedder)).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(metrics::semantic_drift(a, a, embedder) == doctest::Approx(0.0));
    }
}

namespace {

class BrokenEmbedder final : public metrics::EmbeddingProvider {
public:
    std::size_t dimension() const override { return 8; }
    std::vector<double> embed(std::string_view) const override {
        return std::vector<double>(3, 1.0); // violates its own contract
    }
};

} // namespace

TEST_CASE("drift rejects providers that break the dimension contract") {
    BrokenEmbedder broken;
    try {
        metrics::semantic_drift("a", "b", broken);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "DimensionMismatch");
    }
}
