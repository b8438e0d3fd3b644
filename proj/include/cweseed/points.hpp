// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"
#include "cweseed/syntax.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::points {

enum class Category { UncheckedInputBranch, UnsafeCall, UnderValidatedInteraction };

std::string_view to_string(Category category);

struct InjectionPoint {
    Category category = Category::UnsafeCall;
    int start_line = 1; // 1-based, inclusive
    int end_line = 1;
    std::string node_kind;
    std::string snippet;   // file text at the point's span, verbatim
    std::string sink_hint; // matched call/source/sink name
};

/// Name lists are dotted call paths matched by trailing segments:
/// "execute" matches "cursor.execute", "cursor.execute" matches
/// "self.db.cursor.execute" but not "executemany".
struct LanguageHeuristics {
    std::vector<std::string> unsafe_calls;
    std::vector<std::string> input_sources;
    std::vector<std::string> sinks;
    int interaction_window = 5; // lines between a source read and a sink call
};

struct HeuristicConfig {
    std::map<std::string, LanguageHeuristics> languages; // key: language name

    static HeuristicConfig defaults();
    static HeuristicConfig load(const std::filesystem::path& json_path);

    const LanguageHeuristics* for_language(corpus::Language lang) const;
};

/// Rule-based discovery over a clean tree:
///   UnsafeCall                — call whose callee matches unsafe_calls;
///   UncheckedInputBranch      — if/elif/while header reading an input
///                               source directly in its condition;
///   UnderValidatedInteraction — sink call within interaction_window lines
///                               after (or on the same line as) an input
///                               source read.
/// Points are ordered by (start_line, category, sink_hint) and deduplicated.
/// Errors: DirtyTree (the tree has parse errors).
std::vector<InjectionPoint> discover_injection_points(
    const syntax::SyntaxTree& tree, const corpus::SubmissionFile& file,
    const HeuristicConfig& config);

/// Serialized form embedded into injection prompts: one line per point.
std::string describe_points(const std::vector<InjectionPoint>& points);

} // namespace cweseed::points
