// SPDX-License-Identifier: Apache-2.0
#include "cweseed/stats.hpp"

#include "cweseed/csv.hpp"
#include "cweseed/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace cweseed::stats {

namespace {

// Midranks of the pooled sample: tied values share the average of the
// positions they occupy (1-based).
std::vector<double> midranks(const std::vector<double>& pooled_sorted) {
    std::vector<double> ranks(pooled_sorted.size());
    std::size_t i = 0;
    while (i < pooled_sorted.size()) {
        std::size_t j = i;
        while (j + 1 < pooled_sorted.size() &&
               pooled_sorted[j + 1] == pooled_sorted[i]) {
            ++j;
        }
        double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

double normal_sf(double z) {
    // survival function of the standard normal
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// Exact two-sided p by full enumeration: fraction of the C(N, n1) group
// assignments whose U is at least as far from n1*n2/2 as the observed one.
double exact_p(const std::vector<double>& ranks, int n1, double u1_observed) {
    const int n = static_cast<int>(ranks.size());
    const int n2 = n - n1;
    const double mu = static_cast<double>(n1) * n2 / 2.0;
    const double observed_dev = std::abs(u1_observed - mu) - 1e-12;

    std::vector<int> idx(n1);
    std::iota(idx.begin(), idx.end(), 0);
    long long hits = 0, total = 0;
    const double rank_offset = static_cast<double>(n1) * (n1 + 1) / 2.0;
    while (true) {
        double rank_sum = 0.0;
        for (int i : idx) {
            rank_sum += ranks[i];
        }
        double u = rank_sum - rank_offset;
        if (std::abs(u - mu) >= observed_dev) {
            ++hits;
        }
        ++total;
        // next combination
        int pos = n1 - 1;
        while (pos >= 0 && idx[pos] == n - n1 + pos) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++idx[pos];
        for (int k = pos + 1; k < n1; ++k) {
            idx[k] = idx[k - 1] + 1;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::string trim_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    std::string s(buf);
    if (s.size() >= 2 && s.back() == '0' && s[s.size() - 2] != '.') {
        s.pop_back(); // "4.40" -> "4.4", but keep "4.0"
    }
    return s;
}

std::string format_u(double u) {
    double rounded = std::round(u);
    if (std::abs(u - rounded) < 1e-9) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.0f", rounded);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", u);
    return buf;
}

std::string format_alpha(double alpha) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    std::string s(buf);
    if (s.rfind("0.", 0) == 0) {
        s.erase(0, 1); // "0.05" -> ".05"
    }
    return s;
}

} // namespace

TestResult mann_whitney(std::span<const double> x, std::span<const double> y,
                        MethodChoice choice) {
    if (x.empty() || y.empty()) {
        throw Error("EmptyGroup", "both samples must be nonempty");
    }
    const int n1 = static_cast<int>(x.size());
    const int n2 = static_cast<int>(y.size());
    const int n = n1 + n2;

    // Pool, sort, midrank; remember which entries belong to x.
    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double v : x) pooled.emplace_back(v, 0);
    for (double v : y) pooled.emplace_back(v, 1);
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) {
        values[i] = pooled[i].first;
    }
    std::vector<double> ranks = midranks(values);

    double rank_sum_x = 0.0;
    for (int i = 0; i < n; ++i) {
        if (pooled[i].second == 0) {
            rank_sum_x += ranks[i];
        }
    }
    TestResult result;
    result.n1 = n1;
    result.n2 = n2;
    result.u1 = rank_sum_x - static_cast<double>(n1) * (n1 + 1) / 2.0;
    result.u2 = static_cast<double>(n1) * n2 - result.u1;
    result.u_report = std::min(result.u1, result.u2);
    result.r_rank_biserial = rank_biserial(result.u1, n1, n2);

    bool exact = choice == MethodChoice::ForceExact ||
                 (choice == MethodChoice::Auto && n <= 12);
    if (exact) {
        result.method = Method::Exact;
        result.p_two_sided = exact_p(ranks, n1, result.u1);
        return result;
    }

    result.method = Method::NormalApprox;
    const double mu = static_cast<double>(n1) * n2 / 2.0;
    // Tie-corrected variance over midranks.
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j + 1 < values.size() && values[j + 1] == values[i]) {
            ++j;
        }
        double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const bool has_ties = tie_term > 0.0;
    double variance = (static_cast<double>(n1) * n2 / 12.0) *
                      (static_cast<double>(n + 1) -
                       tie_term / (static_cast<double>(n) * (n - 1)));
    if (variance <= 0.0) {
        result.p_two_sided = 1.0; // every pooled value tied
        return result;
    }

    // p = 2 * P(U <= min(U1,U2)) with 0.5 continuity correction. For
    // tie-free data the normal CDF gets an Edgeworth refinement from the
    // exact 4th and 6th cumulants of the null U distribution; the correction
    // decays as 1/n and is what keeps the approximation inside 0.01 of the
    // exact permutation p down to n1+n2 = 8 on balanced groups.
    const double sd = std::sqrt(variance);
    const double z = (result.u_report + 0.5 - mu) / sd;
    double cdf = 1.0 - normal_sf(z);
    if (!has_ties) {
        const double e = static_cast<double>(n1) * n2;
        const double s = n;
        const double k4 = -e * (s + 1.0) *
                          (static_cast<double>(n1) * n1 + static_cast<double>(n2) * n2 +
                           e + n1 + n2) /
                          120.0;
        const double k6 = e * (s + 1.0) *
                          (2 * s * s * s * s + 4 * s * s * s + s * s - s -
                           4 * e * s * s - 5 * e * s + 2 * e * e) /
                          504.0;
        const double g2 = k4 / (variance * variance);
        const double l6 = k6 / (variance * variance * variance);
        const double he3 = z * z * z - 3 * z;
        const double he5 = std::pow(z, 5) - 10 * z * z * z + 15 * z;
        const double he7 = std::pow(z, 7) - 21 * std::pow(z, 5) +
                           105 * z * z * z - 105 * z;
        const double density = std::exp(-z * z / 2.0) / std::sqrt(2.0 * M_PI);
        cdf -= density * (g2 / 24.0 * he3 + l6 / 720.0 * he5 +
                          g2 * g2 / 1152.0 * he7);
    }
    result.p_two_sided = std::clamp(2.0 * cdf, 0.0, 1.0);
    return result;
}

double rank_biserial(double u1, int n1, int n2) {
    if (n1 < 1 || n2 < 1) {
        throw Error("EmptyGroup", "group sizes must be positive");
    }
    const double max_u = static_cast<double>(n1) * n2;
    if (u1 < -1e-9 || u1 > max_u + 1e-9) {
        throw Error("OutOfRangeU",
                    "U must lie in [0, n1*n2] = [0, " + std::to_string(max_u) + "]");
    }
    return 2.0 * u1 / max_u - 1.0;
}

LikertSummary likert_summary(std::span<const int> responses) {
    if (responses.empty()) {
        throw Error("EmptyGroup", "no responses");
    }
    int counts[3] = {0, 0, 0}; // disagree, neutral, agree
    double sum = 0.0;
    for (int r : responses) {
        if (r < 1 || r > 5) {
            throw Error("OutOfScale", "response " + std::to_string(r) +
                                          " outside 1..5");
        }
        sum += r;
        if (r <= 2) {
            ++counts[0];
        } else if (r == 3) {
            ++counts[1];
        } else {
            ++counts[2];
        }
    }
    const double n = static_cast<double>(responses.size());

    LikertSummary out;
    out.mean = sum / n;
    double ss = 0.0;
    for (int r : responses) {
        double d = r - out.mean;
        ss += d * d;
    }
    out.sd = responses.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    // Largest-remainder rounding to tenths so the three percentages sum to
    // exactly 100.0.
    double raw[3];
    long long tenths[3];
    double rem[3];
    long long total_tenths = 0;
    for (int i = 0; i < 3; ++i) {
        raw[i] = 1000.0 * counts[i] / n; // in tenths of a percent
        tenths[i] = static_cast<long long>(std::floor(raw[i]));
        rem[i] = raw[i] - static_cast<double>(tenths[i]);
        total_tenths += tenths[i];
    }
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) {
        if (rem[a] != rem[b]) return rem[a] > rem[b];
        return a < b;
    });
    for (int k = 0; total_tenths < 1000; ++k) {
        ++tenths[order[k % 3]];
        ++total_tenths;
    }
    out.pct_disagree = static_cast<double>(tenths[0]) / 10.0;
    out.pct_neutral = static_cast<double>(tenths[1]) / 10.0;
    out.pct_agree = static_cast<double>(tenths[2]) / 10.0;
    return out;
}

std::string format_mean_sd(double mean, double sd) {
    return trim_number(mean) + " (" + trim_number(sd) + ")";
}

std::vector<TableRow> significance_table(std::span<const SurveyDataset> datasets,
                                         double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("BadArgument", "alpha must lie in (0,1)");
    }
    std::vector<TableRow> rows;
    rows.reserve(datasets.size());
    const std::string alpha_text = format_alpha(alpha);
    for (const auto& ds : datasets) {
        std::vector<double> a(ds.group_a.begin(), ds.group_a.end());
        std::vector<double> b(ds.group_b.begin(), ds.group_b.end());
        TestResult t = mann_whitney(a, b);

        std::vector<int> ga = ds.group_a;
        std::vector<int> gb = ds.group_b;
        LikertSummary sa = likert_summary(ga);
        LikertSummary sb = likert_summary(gb);

        TableRow row;
        row.item = ds.item + (ds.reverse_coded ? "*" : "");
        row.group_a_cell = format_mean_sd(sa.mean, sa.sd);
        row.group_b_cell = format_mean_sd(sb.mean, sb.sd);
        if (t.p_two_sided < alpha) {
            char rbuf[64];
            std::snprintf(rbuf, sizeof(rbuf), "%.2f", t.r_rank_biserial);
            row.significance = "p < " + alpha_text + " (r=" + rbuf +
                               ", U=" + format_u(t.u_report) + ")";
        } else {
            row.significance = "ns, p > " + alpha_text;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_table_text(std::span<const TableRow> rows) {
    const std::string headers[4] = {"Item", "Group A mean (SD)",
                                    "Group B mean (SD)", "Significance"};
    std::size_t widths[4];
    for (int c = 0; c < 4; ++c) {
        widths[c] = headers[c].size();
    }
    for (const auto& row : rows) {
        widths[0] = std::max(widths[0], row.item.size());
        widths[1] = std::max(widths[1], row.group_a_cell.size());
        widths[2] = std::max(widths[2], row.group_b_cell.size());
        widths[3] = std::max(widths[3], row.significance.size());
    }
    std::ostringstream out;
    auto emit = [&](const std::string* cells) {
        for (int c = 0; c < 4; ++c) {
            out << cells[c];
            if (c != 3) {
                out << std::string(widths[c] - cells[c].size() + 2, ' ');
            }
        }
        out << '\n';
    };
    emit(headers);
    std::string rule;
    for (int c = 0; c < 4; ++c) {
        rule += std::string(widths[c], '-');
        if (c != 3) rule += "  ";
    }
    out << rule << '\n';
    for (const auto& row : rows) {
        const std::string cells[4] = {row.item, row.group_a_cell,
                                      row.group_b_cell, row.significance};
        emit(cells);
    }
    return out.str();
}

std::string format_table_csv(std::span<const TableRow> rows) {
    csv::Table table;
    table.header = {"item", "group_a_mean_sd", "group_b_mean_sd", "significance"};
    for (const auto& row : rows) {
        table.rows.push_back({row.item, row.group_a_cell, row.group_b_cell,
                              row.significance});
    }
    return csv::write(table);
}

std::vector<SurveyDataset> load_survey_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    int item_col = -1, group_col = -1, resp_col = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        std::string h = table.header[i];
        std::transform(h.begin(), h.end(), h.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (h == "item") item_col = static_cast<int>(i);
        else if (h == "group") group_col = static_cast<int>(i);
        else if (h == "response") resp_col = static_cast<int>(i);
    }
    if (item_col < 0 || group_col < 0 || resp_col < 0) {
        throw Error("MissingColumn", "survey CSV needs item, group, response columns");
    }

    std::vector<SurveyDataset> datasets;
    std::map<std::string, std::size_t> index;
    std::string label_a;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw Error("MalformedRow", "survey row " + std::to_string(r + 2) +
                                            " column count mismatch");
        }
        std::string item = row[item_col];
        bool reverse = !item.empty() && item.back() == '*';
        if (reverse) {
            item.pop_back();
        }
        int response;
        try {
            response = std::stoi(row[resp_col]);
        } catch (const std::exception&) {
            throw Error("MalformedRow", "survey row " + std::to_string(r + 2) +
                                            ": bad response '" + row[resp_col] + "'");
        }
        if (response < 1 || response > 5) {
            throw Error("OutOfScale", "survey row " + std::to_string(r + 2) +
                                          ": response outside 1..5");
        }
        auto [it, inserted] = index.emplace(item, datasets.size());
        if (inserted) {
            SurveyDataset ds;
            ds.item = item;
            ds.reverse_coded = reverse;
            datasets.push_back(std::move(ds));
        } else if (reverse) {
            datasets[it->second].reverse_coded = true;
        }
        SurveyDataset& ds = datasets[it->second];
        if (label_a.empty()) {
            label_a = row[group_col];
        }
        if (row[group_col] == label_a) {
            ds.group_a.push_back(response);
        } else {
            ds.group_b.push_back(response);
        }
    }
    return datasets;
}

} // namespace cweseed::stats
