// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cweseed::textdiff {

struct LineRange {
    int first = 0; // 1-based, inclusive
    int last = 0;
};

/// One contiguous change: lines original.first..original.last are replaced
/// by `lines` (which occupy modified.first..modified.last in the modified
/// text). Pure insertions have original.first == original.last + 1; pure
/// deletions have modified.first == modified.last + 1. Replacement lines
/// keep their '\n' terminators so apply_edits is byte-exact.
struct LineEdit {
    LineRange original;
    LineRange modified;
    std::vector<std::string> lines;
};

/// LCS-based line diff. Empty iff the texts are equal.
std::vector<LineEdit> line_diff(std::string_view original, std::string_view modified);

/// Apply edits back onto `original`; reconstructs the modified text exactly
/// (used by tests as the reconstruction oracle, and kept next to line_diff
/// so the two stay in sync).
std::string apply_edits(std::string_view original, const std::vector<LineEdit>& edits);

/// Modified-side line ranges for display marking. A pure deletion marks the
/// nearest surviving line before the cut (clamped to 1) so the seam stays
/// visible; an empty modified text yields no ranges.
std::vector<LineRange> changed_regions(const std::vector<LineEdit>& edits,
                                       int modified_line_count);

std::vector<std::string> split_lines(std::string_view text);

} // namespace cweseed::textdiff
