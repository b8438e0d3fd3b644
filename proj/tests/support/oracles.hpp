// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by tests. Each one takes a
// deliberately different algorithmic route from the library code it checks:
// the gestalt oracle selects longest blocks by dynamic programming instead of
// the position-index greedy walk, and the Mann-Whitney oracles count pairs
// directly instead of going through midrank sums.
#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

namespace oracles {

struct Block {
    std::size_t a_start = 0;
    std::size_t b_start = 0;
    std::size_t length = 0;
};

// Longest common block of a[alo,ahi) x b[blo,bhi); ties resolve to the
// smallest a_start, then smallest b_start.
inline Block longest_block_dp(std::string_view a, std::string_view b,
                              std::size_t alo, std::size_t ahi,
                              std::size_t blo, std::size_t bhi) {
    const std::size_t nb = bhi - blo;
    std::vector<std::size_t> prev(nb + 1, 0), cur(nb + 1, 0);
    Block best;
    for (std::size_t i = alo; i < ahi; ++i) {
        for (std::size_t j = blo; j < bhi; ++j) {
            std::size_t c = j - blo + 1;
            if (a[i] == b[j]) {
                cur[c] = prev[c - 1] + 1;
                std::size_t k = cur[c];
                std::size_t a_start = i - k + 1;
                std::size_t b_start = j - k + 1;
                if (k > best.length ||
                    (k == best.length && k > 0 &&
                     (a_start < best.a_start ||
                      (a_start == best.a_start && b_start < best.b_start)))) {
                    best = {a_start, b_start, k};
                }
            } else {
                cur[c] = 0;
            }
        }
        std::swap(prev, cur);
    }
    return best;
}

inline std::size_t gestalt_matched(std::string_view a, std::string_view b,
                                   std::size_t alo, std::size_t ahi,
                                   std::size_t blo, std::size_t bhi) {
    if (alo >= ahi || blo >= bhi) {
        return 0;
    }
    Block blk = longest_block_dp(a, b, alo, ahi, blo, bhi);
    if (blk.length == 0) {
        return 0;
    }
    return blk.length + gestalt_matched(a, b, alo, blk.a_start, blo, blk.b_start) +
           gestalt_matched(a, b, blk.a_start + blk.length, ahi,
                           blk.b_start + blk.length, bhi);
}

inline double gestalt_ratio(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) {
        return 1.0;
    }
    std::size_t m = gestalt_matched(a, b, 0, a.size(), 0, b.size());
    return 2.0 * static_cast<double>(m) / static_cast<double>(a.size() + b.size());
}

// U1 by direct pair counting: #{x_i > y_j} + 0.5 * #{x_i == y_j}.
inline double mann_whitney_u1_pairs(std::span<const double> x,
                                    std::span<const double> y) {
    double u = 0.0;
    for (double xi : x) {
        for (double yj : y) {
            if (xi > yj) {
                u += 1.0;
            } else if (xi == yj) {
                u += 0.5;
            }
        }
    }
    return u;
}

// Exact two-sided permutation p: enumerate every way to label n1 of the
// pooled values as group one (recursive, not the iterative combination walk
// the library uses) and count assignments at least as extreme as observed.
inline double mann_whitney_exact_p_enum(std::span<const double> x,
                                        std::span<const double> y) {
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    const int n = static_cast<int>(pooled.size());
    const int n1 = static_cast<int>(x.size());
    const double mu = static_cast<double>(n1) * (n - n1) / 2.0;
    const double observed = std::abs(mann_whitney_u1_pairs(x, y) - mu) - 1e-12;

    long long hits = 0, total = 0;
    std::vector<int> chosen;
    auto recurse = [&](auto&& self, int next, int remaining) -> void {
        if (remaining == 0) {
            std::vector<double> gx, gy;
            std::vector<bool> in_x(n, false);
            for (int c : chosen) {
                in_x[c] = true;
            }
            for (int i = 0; i < n; ++i) {
                (in_x[i] ? gx : gy).push_back(pooled[i]);
            }
            double u = mann_whitney_u1_pairs(gx, gy);
            if (std::abs(u - mu) >= observed) {
                ++hits;
            }
            ++total;
            return;
        }
        if (n - next < remaining) {
            return;
        }
        for (int i = next; i <= n - remaining; ++i) {
            chosen.push_back(i);
            self(self, i + 1, remaining - 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0, n1);
    return static_cast<double>(hits) / static_cast<double>(total);
}

} // namespace oracles
