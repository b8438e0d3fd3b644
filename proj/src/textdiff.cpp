// SPDX-License-Identifier: Apache-2.0
#include "cweseed/textdiff.hpp"

#include <algorithm>

namespace cweseed::textdiff {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) {
                lines.emplace_back(text.substr(start));
            }
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

namespace {

// Lines including their '\n' terminator; the final line may lack one. A
// trailing-newline-only difference then shows up as a changed last line,
// which keeps reconstruction byte-exact.
std::vector<std::string> split_keepends(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start + 1));
        start = nl + 1;
    }
    return lines;
}

} // namespace

std::vector<LineEdit> line_diff(std::string_view original, std::string_view modified) {
    if (original == modified) {
        return {};
    }
    std::vector<std::string> a = split_keepends(original);
    std::vector<std::string> b = split_keepends(modified);

    // Trim the common prefix/suffix first; injections usually touch one
    // small region, which keeps the LCS table tiny.
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
        ++prefix;
    }
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
        ++suffix;
    }
    const std::size_t na = a.size() - prefix - suffix;
    const std::size_t nb = b.size() - prefix - suffix;

    // LCS lengths over the middle window.
    std::vector<std::vector<int>> lcs(na + 1, std::vector<int>(nb + 1, 0));
    for (std::size_t i = na; i-- > 0;) {
        for (std::size_t j = nb; j-- > 0;) {
            if (a[prefix + i] == b[prefix + j]) {
                lcs[i][j] = lcs[i + 1][j + 1] + 1;
            } else {
                lcs[i][j] = std::max(lcs[i + 1][j], lcs[i][j + 1]);
            }
        }
    }

    std::vector<LineEdit> edits;
    std::size_t i = 0, j = 0;
    auto open_edit = [&]() -> LineEdit& {
        int orig_line = static_cast<int>(prefix + i) + 1;
        int mod_line = static_cast<int>(prefix + j) + 1;
        if (!edits.empty()) {
            LineEdit& last = edits.back();
            int orig_next = std::max(last.original.last, last.original.first - 1) + 1;
            int mod_next = std::max(last.modified.last, last.modified.first - 1) + 1;
            if (orig_next == orig_line && mod_next == mod_line) {
                return last;
            }
        }
        LineEdit edit;
        edit.original = {orig_line, orig_line - 1};
        edit.modified = {mod_line, mod_line - 1};
        edits.push_back(std::move(edit));
        return edits.back();
    };
    while (i < na || j < nb) {
        if (i < na && j < nb && a[prefix + i] == b[prefix + j]) {
            ++i;
            ++j;
            continue;
        }
        if (j < nb && (i == na || lcs[i][j + 1] >= lcs[i + 1][j])) {
            LineEdit& edit = open_edit();
            edit.modified.last = static_cast<int>(prefix + j) + 1;
            edit.lines.push_back(b[prefix + j]);
            ++j;
        } else {
            LineEdit& edit = open_edit();
            edit.original.last = static_cast<int>(prefix + i) + 1;
            ++i;
        }
    }
    return edits;
}

std::string apply_edits(std::string_view original, const std::vector<LineEdit>& edits) {
    std::vector<std::string> a = split_keepends(original);
    std::string out;
    std::size_t cursor = 0; // 0-based index into a
    for (const auto& edit : edits) {
        std::size_t start = static_cast<std::size_t>(edit.original.first - 1);
        while (cursor < start && cursor < a.size()) {
            out += a[cursor++];
        }
        for (const auto& line : edit.lines) {
            out += line;
        }
        if (edit.original.last >= edit.original.first) {
            cursor = static_cast<std::size_t>(edit.original.last);
        }
    }
    while (cursor < a.size()) {
        out += a[cursor++];
    }
    return out;
}

std::vector<LineRange> changed_regions(const std::vector<LineEdit>& edits,
                                       int modified_line_count) {
    std::vector<LineRange> regions;
    for (const auto& edit : edits) {
        if (edit.modified.last >= edit.modified.first) {
            regions.push_back(edit.modified);
        } else if (modified_line_count > 0) {
            int line = std::clamp(edit.modified.first - 1, 1, modified_line_count);
            regions.push_back({line, line});
        }
    }
    // Merge overlaps introduced by deletion markers.
    std::sort(regions.begin(), regions.end(), [](const LineRange& x, const LineRange& y) {
        return x.first < y.first || (x.first == y.first && x.last < y.last);
    });
    std::vector<LineRange> merged;
    for (const auto& r : regions) {
        if (!merged.empty() && r.first <= merged.back().last + 1) {
            merged.back().last = std::max(merged.back().last, r.last);
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

} // namespace cweseed::textdiff
