// SPDX-License-Identifier: Apache-2.0
#include "cweseed/error.hpp"
#include "cweseed/stats.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

using namespace cweseed;

namespace {

std::vector<double> random_sample(std::mt19937_64& gen, int max_n, int value_range) {
    std::uniform_int_distribution<int> n_dist(1, max_n);
    std::uniform_int_distribution<int> v_dist(0, value_range);
    std::vector<double> out(n_dist(gen));
    for (auto& v : out) {
        v = v_dist(gen); // integer values force ties
    }
    return out;
}

} // namespace

TEST_CASE("mann_whitney on fully separated tiny samples") {
    std::vector<double> x{1, 2}, y{3, 4};
    auto r = stats::mann_whitney(x, y);
    CHECK(r.u1 == doctest::Approx(0.0));
    CHECK(r.u2 == doctest::Approx(4.0));
    CHECK(r.method == stats::Method::Exact);
    // 6 equally likely rank assignments, 2 as extreme as observed.
    CHECK(r.p_two_sided == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("mann_whitney equals n1*n2/2 on identical samples") {
    std::vector<double> x{1, 2, 3};
    auto r = stats::mann_whitney(x, x);
    CHECK(r.u1 == doctest::Approx(4.5));
    CHECK(r.u2 == doctest::Approx(4.5));
    CHECK(r.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("mann_whitney rejects empty groups") {
    std::vector<double> x{1.0}, empty;
    try {
        stats::mann_whitney(x, empty);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.code() == "EmptyGroup");
    }
}

TEST_CASE("U statistic matches brute-force pair counting on tied samples") {
    std::mt19937_64 gen(2024);
    for (int i = 0; i < 300; ++i) {
        auto x = random_sample(gen, 10, 5);
        auto y = random_sample(gen, 10, 5);
        auto r = stats::mann_whitney(x, y);
        double want = oracles::mann_whitney_u1_pairs(x, y);
        CHECK(r.u1 == doctest::Approx(want).epsilon(1e-12));
        CHECK(r.u1 + r.u2 == doctest::Approx(static_cast<double>(x.size() * y.size())));
        CHECK(r.u_report == doctest::Approx(std::min(r.u1, r.u2)));
    }
}

TEST_CASE("exact p matches the enumeration oracle") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 60; ++i) {
        auto x = random_sample(gen, 5, 4);
        auto y = random_sample(gen, 5, 4);
        auto r = stats::mann_whitney(x, y, stats::MethodChoice::ForceExact);
        double want = oracles::mann_whitney_exact_p_enum(x, y);
        CHECK(r.p_two_sided == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("antisymmetry: swapping groups swaps U1 and U2") {
    std::mt19937_64 gen(55);
    for (int i = 0; i < 100; ++i) {
        auto x = random_sample(gen, 8, 6);
        auto y = random_sample(gen, 8, 6);
        auto ab = stats::mann_whitney(x, y);
        auto ba = stats::mann_whitney(y, x);
        CHECK(ab.u1 == doctest::Approx(ba.u2).epsilon(1e-12));
        CHECK(ab.u2 == doctest::Approx(ba.u1).epsilon(1e-12));
    }
}

TEST_CASE("normal approximation tracks exact p on tie-free data") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> v_dist(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        int n1 = 4 + static_cast<int>(gen() % 3); // 4..6
        int n2 = 4 + static_cast<int>(gen() % 3);
        std::vector<double> x(n1), y(n2);
        for (auto& v : x) v = v_dist(gen);
        for (auto& v : y) v = v_dist(gen);
        auto exact = stats::mann_whitney(x, y, stats::MethodChoice::ForceExact);
        auto approx = stats::mann_whitney(x, y, stats::MethodChoice::ForceNormal);
        CHECK(approx.method == stats::Method::NormalApprox);
        CHECK(std::abs(exact.p_two_sided - approx.p_two_sided) < 0.01);
    }
}

TEST_CASE("large samples switch to the normal approximation") {
    std::vector<double> x(30, 1.0), y(41, 5.0);
    for (int i = 0; i < 30; ++i) x[i] += i * 0.01;
    for (int i = 0; i < 41; ++i) y[i] += i * 0.01;
    auto r = stats::mann_whitney(x, y);
    CHECK(r.method == stats::Method::NormalApprox);
    CHECK(r.u1 == doctest::Approx(0.0));
    CHECK(r.p_two_sided < 0.05);
}

TEST_CASE("rank_biserial identities") {
    CHECK(stats::rank_biserial(0, 3, 4) == doctest::Approx(-1.0));
    CHECK(stats::rank_biserial(6, 3, 4) == doctest::Approx(0.0));
    CHECK(stats::rank_biserial(12, 3, 4) == doctest::Approx(1.0));
    // 2*832/(30*41) - 1; the formula result, not the out-of-range value
    // printed in some reports.
    CHECK(stats::rank_biserial(832, 30, 41) == doctest::Approx(0.3528).epsilon(1e-4));
}

TEST_CASE("rank_biserial rejects out-of-range U") {
    try {
        stats::rank_biserial(13, 3, 4);
        FAIL("expected OutOfRangeU");
    } catch (const Error& e) {
        CHECK(e.code() == "OutOfRangeU");
    }
}

TEST_CASE("rank_biserial mirror identity on random draws") {
    std::mt19937_64 gen(8);
    for (int i = 0; i < 1000; ++i) {
        int n1 = 1 + static_cast<int>(gen() % 40);
        int n2 = 1 + static_cast<int>(gen() % 40);
        double max_u = static_cast<double>(n1) * n2;
        double u = static_cast<double>(gen() % 1000) / 999.0 * max_u;
        double r = stats::rank_biserial(u, n1, n2);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(r == doctest::Approx(-stats::rank_biserial(max_u - u, n1, n2)).epsilon(1e-9));
    }
}

TEST_CASE("likert_summary basic shapes") {
    std::vector<int> all_agree{5, 5, 5};
    auto s = stats::likert_summary(all_agree);
    CHECK(s.pct_agree == doctest::Approx(100.0));
    CHECK(s.pct_disagree == doctest::Approx(0.0));
    CHECK(s.mean == doctest::Approx(5.0));
    CHECK(s.sd == doctest::Approx(0.0));

    std::vector<int> spread{1, 2, 3, 4, 5};
    auto t = stats::likert_summary(spread);
    CHECK(t.pct_disagree == doctest::Approx(40.0));
    CHECK(t.pct_neutral == doctest::Approx(20.0));
    CHECK(t.pct_agree == doctest::Approx(40.0));

    std::vector<int> trio{4, 4, 5};
    auto u = stats::likert_summary(trio);
    CHECK(u.mean == doctest::Approx(4.3333333).epsilon(1e-6));
    CHECK(u.sd == doctest::Approx(0.5773503).epsilon(1e-6));
    CHECK(stats::format_mean_sd(u.mean, u.sd) == "4.33 (0.58)");
}

TEST_CASE("likert percentages always sum to exactly 100") {
    std::mt19937_64 gen(12);
    for (int i = 0; i < 500; ++i) {
        std::vector<int> responses(1 + gen() % 30);
        for (auto& r : responses) {
            r = 1 + static_cast<int>(gen() % 5);
        }
        auto s = stats::likert_summary(responses);
        CHECK(s.pct_disagree + s.pct_neutral + s.pct_agree == doctest::Approx(100.0).epsilon(1e-12));
    }
}

TEST_CASE("likert rejects bad input") {
    std::vector<int> bad{1, 6};
    try {
        stats::likert_summary(bad);
        FAIL("expected OutOfScale");
    } catch (const Error& e) {
        CHECK(e.code() == "OutOfScale");
    }
    std::vector<int> empty;
    try {
        stats::likert_summary(empty);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.code() == "EmptyGroup");
    }
}

TEST_CASE("significance table renders the two cell grammars") {
    stats::SurveyDataset same;
    same.item = "Understanding";
    same.group_a = {4, 4, 5, 3, 4};
    same.group_b = {4, 4, 5, 3, 4};

    stats::SurveyDataset separated;
    separated.item = "Confusion";
    separated.reverse_coded = true;
    separated.group_a.assign(10, 1);
    separated.group_b.assign(10, 5);

    std::vector<stats::SurveyDataset> data{same, separated};
    auto rows = stats::significance_table(data, 0.05);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].item == "Understanding");
    CHECK(rows[0].significance == "ns, p > .05");
    CHECK(rows[1].item == "Confusion*");
    CHECK(rows[1].significance == "p < .05 (r=-1.00, U=0)");
    CHECK(rows[1].group_a_cell == "1.0 (0.0)");
    CHECK(rows[1].group_b_cell == "5.0 (0.0)");
}

TEST_CASE("survey CSV loads groups and reverse-coded flags") {
    auto path = std::filesystem::temp_directory_path() / "cweseed_survey_test.csv";
    {
        std::ofstream out(path);
        out << "item,group,response\n";
        out << "Relevance,baseline,4\n";
        out << "Relevance,treatment,5\n";
        out << "Relevance,baseline,3\n";
        out << "Confusion*,baseline,2\n";
        out << "Confusion*,treatment,1\n";
    }
    auto datasets = stats::load_survey_csv(path);
    std::filesystem::remove(path);
    REQUIRE(datasets.size() == 2);
    CHECK(datasets[0].item == "Relevance");
    CHECK(datasets[0].group_a == std::vector<int>{4, 3});
    CHECK(datasets[0].group_b == std::vector<int>{5});
    CHECK_FALSE(datasets[0].reverse_coded);
    CHECK(datasets[1].item == "Confusion");
    CHECK(datasets[1].reverse_coded);
}

TEST_CASE("table text format is aligned and complete") {
    stats::TableRow row{"Interest", "4.1 (0.76)", "4.37 (0.62)", "ns, p > .05"};
    std::vector<stats::TableRow> rows{row};
    std::string text = stats::format_table_text(rows);
    CHECK(text.find("Interest") != std::string::npos);
    CHECK(text.find("ns, p > .05") != std::string::npos);
    std::string csv_text = stats::format_table_csv(rows);
    CHECK(csv_text.find("\"ns, p > .05\"") != std::string::npos);
}
