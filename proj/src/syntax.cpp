// SPDX-License-Identifier: Apache-2.0
#include "cweseed/syntax.hpp"

#include "cweseed/error.hpp"
#include "syntax_internal.hpp"

#include <algorithm>
#include <sstream>

namespace cweseed::syntax {

namespace detail {

SyntaxTree parse_python(std::string_view source);
SyntaxTree parse_javascript(std::string_view source);

void nest_calls(SyntaxTree& tree, int parent, std::vector<int>& calls) {
    // calls ordered by span.begin; a later call nested in an earlier one gets
    // attached to the innermost such container.
    std::vector<int> open;
    for (int idx : calls) {
        const Span span = tree.at(idx).span;
        while (!open.empty() && tree.at(open.back()).span.end <= span.begin) {
            open.pop_back();
        }
        if (!open.empty() && span.end <= tree.at(open.back()).span.end) {
            tree.nodes[open.back()].children.push_back(idx);
        } else {
            tree.nodes[parent].children.push_back(idx);
        }
        open.push_back(idx);
    }
}

std::vector<int> collect_calls(SyntaxTree& tree, std::string_view source,
                               const std::vector<Token>& tokens,
                               std::size_t first, std::size_t last,
                               long skip_paren, const std::vector<bool>* skip_set) {
    std::vector<int> calls;
    for (std::size_t i = first; i < last && i < tokens.size(); ++i) {
        const Token& tok = tokens[i];
        if (tok.kind != TokKind::Op || tok.text != "(" ||
            static_cast<long>(i) == skip_paren ||
            (skip_set != nullptr && (*skip_set)[i]) || i == first) {
            continue;
        }
        const Token& prev = tokens[i - 1];
        bool callable_prefix =
            (prev.kind == TokKind::Name && !prev.call_exempt) ||
            (prev.kind == TokKind::Op && (prev.text == ")" || prev.text == "]"));
        if (!callable_prefix) {
            continue;
        }
        // Walk the dotted name chain backwards: NAME ('.' NAME)*.
        std::string callee;
        std::size_t start = tok.span.begin;
        if (prev.kind == TokKind::Name) {
            std::size_t j = i - 1;
            callee = tokens[j].text;
            start = tokens[j].span.begin;
            while (j >= 2 && tokens[j - 1].kind == TokKind::Op &&
                   tokens[j - 1].text == "." && tokens[j - 2].kind == TokKind::Name) {
                callee = tokens[j - 2].text + "." + callee;
                start = tokens[j - 2].span.begin;
                j -= 2;
            }
        }
        // Find the matching ')'.
        int depth = 0;
        std::size_t close = i;
        for (std::size_t j = i; j < last && j < tokens.size(); ++j) {
            if (tokens[j].kind != TokKind::Op) {
                continue;
            }
            if (tokens[j].text == "(") {
                ++depth;
            } else if (tokens[j].text == ")") {
                --depth;
                if (depth == 0) {
                    close = j;
                    break;
                }
            }
        }
        Node node;
        node.kind = "call";
        node.name = callee;
        node.span = {start, tokens[close].span.end};
        node.head = node.span;
        tree.nodes.push_back(std::move(node));
        calls.push_back(static_cast<int>(tree.nodes.size()) - 1);
    }
    std::sort(calls.begin(), calls.end(), [&](int a, int b) {
        return tree.at(a).span.begin < tree.at(b).span.begin;
    });
    return calls;
}

} // namespace detail

namespace {

class PythonGrammar final : public Grammar {
public:
    corpus::Language language() const override { return corpus::Language::Python; }
    SyntaxTree parse(std::string_view source) const override {
        return detail::parse_python(source);
    }
};

class JavaScriptGrammar final : public Grammar {
public:
    corpus::Language language() const override { return corpus::Language::JavaScript; }
    SyntaxTree parse(std::string_view source) const override {
        return detail::parse_javascript(source);
    }
};

} // namespace

const Grammar* find_grammar(corpus::Language lang) {
    static const PythonGrammar python;
    static const JavaScriptGrammar javascript;
    switch (lang) {
    case corpus::Language::Python: return &python;
    case corpus::Language::JavaScript: return &javascript;
    default: return nullptr;
    }
}

bool supported(corpus::Language lang) { return find_grammar(lang) != nullptr; }

SyntaxTree parse(const corpus::SubmissionFile& file) {
    const Grammar* grammar = find_grammar(file.language);
    if (grammar == nullptr) {
        throw Error("UnsupportedLanguage",
                    "no grammar registered for " +
                        std::string(corpus::to_string(file.language)));
    }
    return grammar->parse(file.content);
}

ValidationResult validate_syntax(std::string_view code, corpus::Language lang) {
    const Grammar* grammar = find_grammar(lang);
    if (grammar == nullptr) {
        throw Error("UnsupportedLanguage",
                    "no grammar registered for " +
                        std::string(corpus::to_string(lang)));
    }
    SyntaxTree tree = grammar->parse(code);
    ValidationResult result;
    result.ok = tree.parse_errors.empty();
    for (const auto& err : tree.parse_errors) {
        result.diagnostics.push_back({err.line, err.column, err.message});
    }
    return result;
}

std::string format_diagnostics(std::string_view path, const ValidationResult& result) {
    std::ostringstream out;
    for (const auto& d : result.diagnostics) {
        out << path << ':' << d.line << ':' << d.column << ": " << d.message << '\n';
    }
    return out.str();
}

std::pair<int, int> line_col(std::string_view source, std::size_t offset) {
    int line = 1, col = 1;
    offset = std::min(offset, source.size());
    for (std::size_t i = 0; i < offset; ++i) {
        if (source[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace cweseed::syntax
