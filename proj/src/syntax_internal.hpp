// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/syntax.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cweseed::syntax::detail {

enum class TokKind { Name, Number, String, Op };

struct Token {
    TokKind kind = TokKind::Op;
    Span span;
    std::string text;
    bool keyword = false;         // reserved word in this grammar
    bool call_exempt = false;     // treated as a keyword for call detection
};

inline std::string_view text_at(std::string_view source, Span span) {
    return source.substr(span.begin, span.end - span.begin);
}

// Attach call nodes to the smallest enclosing call (by span containment),
// otherwise to `parent`. `calls` must be ordered by span.begin ascending.
void nest_calls(SyntaxTree& tree, int parent, std::vector<int>& calls);

// Scan a token run for call expressions: '(' preceded by a non-exempt Name,
// ')' or ']'. Appends call nodes (with dotted callee names) to the tree and
// returns their indices ordered by position. `skip_paren` may name one '('
// token index to ignore and `skip_set` (indexed like tokens) any number of
// them — both mark signature parens of def/class/method headers.
std::vector<int> collect_calls(SyntaxTree& tree, std::string_view source,
                               const std::vector<Token>& tokens,
                               std::size_t first, std::size_t last,
                               long skip_paren = -1,
                               const std::vector<bool>* skip_set = nullptr);

} // namespace cweseed::syntax::detail
