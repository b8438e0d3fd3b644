// SPDX-License-Identifier: Apache-2.0
#include "cweseed/gestalt.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace cweseed::metrics {

namespace {

// Positions of every byte value in b, ascending. Reused across the
// recursive block search so each window only pays for the bytes it touches.
struct PositionIndex {
    std::array<std::vector<std::size_t>, 256> positions;

    explicit PositionIndex(std::string_view b) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            positions[static_cast<unsigned char>(b[j])].push_back(j);
        }
    }
};

MatchBlock find_longest(std::string_view a, const PositionIndex& index,
                        std::size_t a_lo, std::size_t a_hi,
                        std::size_t b_lo, std::size_t b_hi,
                        std::vector<std::size_t>& run_len) {
    MatchBlock best{a_lo, b_lo, 0};
    // run_len[j] = length of the common run ending at (i-1, j); rebuilt per i.
    std::vector<std::size_t> prev_touched;
    for (std::size_t i = a_lo; i < a_hi; ++i) {
        const auto& js = index.positions[static_cast<unsigned char>(a[i])];
        auto lo = std::lower_bound(js.begin(), js.end(), b_lo);
        std::vector<std::size_t> new_touched;
        // Two-pass: read run_len (state for i-1) before overwriting, walking
        // positions ascending so earliest-j ties win.
        std::vector<std::size_t> new_vals;
        for (auto it = lo; it != js.end() && *it < b_hi; ++it) {
            std::size_t j = *it;
            std::size_t k = (j > b_lo ? run_len[j - 1] : 0) + 1;
            new_vals.push_back(k);
            new_touched.push_back(j);
            if (k > best.length) {
                best = {i - k + 1, j - k + 1, k};
            }
        }
        for (std::size_t t : prev_touched) {
            run_len[t] = 0;
        }
        for (std::size_t n = 0; n < new_touched.size(); ++n) {
            run_len[new_touched[n]] = new_vals[n];
        }
        prev_touched = std::move(new_touched);
    }
    for (std::size_t t : prev_touched) {
        run_len[t] = 0;
    }
    return best;
}

} // namespace

MatchBlock longest_match(std::string_view a, std::string_view b,
                         std::size_t a_lo, std::size_t a_hi,
                         std::size_t b_lo, std::size_t b_hi) {
    PositionIndex index(b);
    std::vector<std::size_t> run_len(b.size(), 0);
    return find_longest(a, index, a_lo, a_hi, b_lo, b_hi, run_len);
}

double similarity(std::string_view a, std::string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) {
        return 1.0;
    }
    // The block tie rule references the first operand, which makes the raw
    // ratio order-dependent; canonicalizing the pair makes similarity a
    // symmetric function.
    if (b < a) {
        std::swap(a, b);
    }
    PositionIndex index(b);
    std::vector<std::size_t> run_len(b.size(), 0);

    std::size_t matched = 0;
    std::vector<std::array<std::size_t, 4>> stack;
    stack.push_back({0, a.size(), 0, b.size()});
    while (!stack.empty()) {
        auto [a_lo, a_hi, b_lo, b_hi] = stack.back();
        stack.pop_back();
        if (a_lo >= a_hi || b_lo >= b_hi) {
            continue;
        }
        MatchBlock block = find_longest(a, index, a_lo, a_hi, b_lo, b_hi, run_len);
        if (block.length == 0) {
            continue;
        }
        matched += block.length;
        stack.push_back({a_lo, block.a_start, b_lo, block.b_start});
        stack.push_back({block.a_start + block.length, a_hi,
                         block.b_start + block.length, b_hi});
    }
    return 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

} // namespace cweseed::metrics
