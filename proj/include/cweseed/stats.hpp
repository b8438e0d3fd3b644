// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace cweseed::stats {

enum class Method { Exact, NormalApprox };

enum class MethodChoice { Auto, ForceExact, ForceNormal };

struct TestResult {
    double u1 = 0.0; // midrank-adjusted: #{x_i > y_j} + ties/2
    double u2 = 0.0; // n1*n2 - u1
    double u_report = 0.0; // min(u1, u2)
    double p_two_sided = 1.0;
    Method method = Method::Exact;
    double r_rank_biserial = 0.0;
    int n1 = 0;
    int n2 = 0;
};

/// Two-sample Mann-Whitney U with midranks for ties. Exact p enumerates all
/// C(n1+n2, n1) group assignments of the pooled values and counts those at
/// least as far from n1*n2/2 as the observed U; used when n1+n2 <= 12 unless
/// the caller forces a method. Otherwise the normal approximation with
/// midrank tie correction and 0.5 continuity correction.
/// Errors: EmptyGroup.
TestResult mann_whitney(std::span<const double> x, std::span<const double> y,
                        MethodChoice choice = MethodChoice::Auto);

/// r = 2*U1/(n1*n2) - 1, in [-1,1]; positive means the first group is
/// stochastically larger. Errors: OutOfRangeU.
double rank_biserial(double u1, int n1, int n2);

struct LikertSummary {
    double pct_disagree = 0.0; // responses 1-2
    double pct_neutral = 0.0;  // response 3
    double pct_agree = 0.0;    // responses 4-5
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation (n-1); 0 when n == 1
};

/// Percentages are rounded to one decimal with largest-remainder correction
/// so the three always sum to exactly 100.0.
/// Errors: EmptyGroup, OutOfScale.
LikertSummary likert_summary(std::span<const int> responses);

struct SurveyDataset {
    std::string item;
    std::vector<int> group_a;
    std::vector<int> group_b;
    bool reverse_coded = false;
};

struct TableRow {
    std::string item; // reverse-coded items carry a trailing '*'
    std::string group_a_cell; // "mean (SD)"
    std::string group_b_cell;
    std::string significance; // "ns, p > .05" or "p < .05 (r=0.35, U=832)"
};

/// One row per dataset: group means/SDs plus the significance cell from
/// mann_whitney(group_a, group_b) and rank_biserial.
std::vector<TableRow> significance_table(std::span<const SurveyDataset> datasets,
                                         double alpha = 0.05);

std::string format_table_text(std::span<const TableRow> rows);
std::string format_table_csv(std::span<const TableRow> rows);

/// CSV with header (item, group, response); group values "a"/"b" (or the
/// first two distinct labels in file order). A trailing '*' on the item name
/// marks it reverse-coded. Errors: OutOfScale, MalformedRow.
std::vector<SurveyDataset> load_survey_csv(const std::filesystem::path& path);

/// "4.4" / "4.27" style: two decimals with trailing zero trimmed, at least
/// one decimal kept.
std::string format_mean_sd(double mean, double sd);

} // namespace cweseed::stats
