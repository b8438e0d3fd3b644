// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cweseed/corpus.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::syntax {

struct Span {
    std::size_t begin = 0; // byte offsets, [begin, end)
    std::size_t end = 0;
};

/// Structural node. Kinds are a shared vocabulary across grammars:
/// "module", "function_def", "class_def", "if_stmt", "elif_clause",
/// "else_clause", "for_stmt", "while_stmt", "try_stmt", "except_clause",
/// "finally_clause", "with_stmt", "switch_stmt", "return_stmt",
/// "raise_stmt", "throw_stmt", "import_stmt", "assign_stmt", "decl_stmt",
/// "expr_stmt", "arrow_function", "call".
struct Node {
    std::string kind;
    Span span;        // whole construct, children included
    Span head;        // header/condition portion (== span for simple statements)
    std::string name; // def/class name, or dotted callee for calls
    std::vector<int> children;
};

struct ParseError {
    Span span;
    int line = 1; // 1-based
    int column = 1;
    std::string message;
};

struct SyntaxTree {
    corpus::Language language = corpus::Language::Python;
    std::vector<Node> nodes; // root first when nonempty
    int root = -1;
    std::vector<ParseError> parse_errors;

    bool clean() const { return parse_errors.empty(); }
    const Node& at(int index) const { return nodes[static_cast<std::size_t>(index)]; }
};

/// Grammar adapter. Implementations must be error tolerant: parse() records
/// problems in parse_errors and never throws on malformed source.
class Grammar {
public:
    virtual ~Grammar() = default;
    virtual corpus::Language language() const = 0;
    virtual SyntaxTree parse(std::string_view source) const = 0;
};

/// Registered grammars: Python and JavaScript ship in-tree; Java and Kotlin
/// return nullptr (the pipeline treats those files as unsupported).
const Grammar* find_grammar(corpus::Language lang);
bool supported(corpus::Language lang);

/// Parse a submission file with the registered grammar.
/// Errors: UnsupportedLanguage.
SyntaxTree parse(const corpus::SubmissionFile& file);

struct Diagnostic {
    int line = 1;
    int column = 1;
    std::string message;
};

struct ValidationResult {
    bool ok = false;
    std::vector<Diagnostic> diagnostics;
};

/// ok iff a fresh parse yields zero parse errors.
/// Errors: UnsupportedLanguage.
ValidationResult validate_syntax(std::string_view code, corpus::Language lang);

/// "path:line:col: message" lines, one per diagnostic.
std::string format_diagnostics(std::string_view path, const ValidationResult& result);

/// 1-based (line, column) of a byte offset.
std::pair<int, int> line_col(std::string_view source, std::size_t offset);

/// Walk the tree depth-first from the root, visiting every node index.
template <typename Fn>
void walk(const SyntaxTree& tree, Fn&& fn) {
    if (tree.root < 0) {
        return;
    }
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
        int index = stack.back();
        stack.pop_back();
        fn(index, tree.at(index));
        const auto& children = tree.at(index).children;
        for (auto it = children.rbegin(); it != children.rend(); ++it) {
            stack.push_back(*it);
        }
    }
}

} // namespace cweseed::syntax
