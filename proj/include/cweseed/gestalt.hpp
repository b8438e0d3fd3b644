// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>

namespace cweseed::metrics {

/// Ratcliff/Obershelp gestalt pattern matching ratio, 2*M/(|a|+|b|), where M
/// totals the characters covered by recursively matched longest common
/// blocks. Ties between equally long blocks resolve to the block starting
/// earliest in the first operand, then earliest in the second; the pair is
/// put in lexicographic order first so the result is symmetric. Both strings
/// empty -> 1.0.
double similarity(std::string_view a, std::string_view b);

struct MatchBlock {
    std::size_t a_start = 0;
    std::size_t b_start = 0;
    std::size_t length = 0;
};

/// Longest common block of a[a_lo,a_hi) and b[b_lo,b_hi) under the tie rule
/// above. Exposed so the matching rule itself can be tested.
MatchBlock longest_match(std::string_view a, std::string_view b,
                         std::size_t a_lo, std::size_t a_hi,
                         std::size_t b_lo, std::size_t b_hi);

} // namespace cweseed::metrics
