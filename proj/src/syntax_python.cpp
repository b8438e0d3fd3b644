// SPDX-License-Identifier: Apache-2.0
//
// Error-tolerant structural Python grammar. Statement-level nodes plus call
// expressions with byte-accurate spans; anything the lexer cannot place is
// recorded as a parse error instead of thrown. f-string interiors are kept
// opaque (calls inside format slots are not discovered).
#include "cweseed/syntax.hpp"

#include "syntax_internal.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <string>
#include <unordered_set>

namespace cweseed::syntax::detail {

namespace {

const std::unordered_set<std::string>& python_keywords() {
    static const std::unordered_set<std::string> kw{
        "False", "None", "True", "and", "as", "assert", "async", "await",
        "break", "class", "continue", "def", "del", "elif", "else", "except",
        "finally", "for", "from", "global", "if", "import", "in", "is",
        "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try",
        "while", "with", "yield",
    };
    return kw;
}

bool is_name_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_string_prefix(const std::string& text) {
    if (text.empty() || text.size() > 2) {
        return false;
    }
    for (char c : text) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'b' && l != 'u' && l != 'f') {
            return false;
        }
    }
    return true;
}

const std::array<std::string_view, 25> kMultiOps = {
    "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "@=", "&=", "|=", "^=", "**", "//", ">>",
    "<<", "!=",
};

struct LogicalLine {
    int indent = 0;
    std::size_t tok_first = 0;
    std::size_t tok_count = 0;
    Span span;
};

struct PendingError {
    std::size_t offset;
    std::string message;
};

struct Lexed {
    std::vector<Token> tokens;
    std::vector<LogicalLine> lines;
    std::vector<PendingError> errors;
};

Lexed lex(std::string_view src) {
    Lexed out;
    std::size_t pos = 0;
    const std::size_t n = src.size();

    std::vector<char> bracket_stack;
    std::vector<std::size_t> bracket_offsets;

    LogicalLine current;
    bool line_open = false;
    std::size_t line_token_start = 0;

    auto begin_line = [&](int indent, std::size_t offset) {
        current = {};
        current.indent = indent;
        current.tok_first = out.tokens.size();
        current.span.begin = offset;
        line_token_start = out.tokens.size();
        line_open = true;
    };
    auto end_line = [&](std::size_t offset) {
        if (!line_open) {
            return;
        }
        current.tok_count = out.tokens.size() - line_token_start;
        current.span.end = offset;
        if (current.tok_count > 0) {
            out.lines.push_back(current);
        }
        line_open = false;
    };

    while (pos < n) {
        if (!line_open) {
            // Measure indentation; tabs advance to the next multiple of 8.
            std::size_t line_start = pos;
            int indent = 0;
            while (pos < n && (src[pos] == ' ' || src[pos] == '\t')) {
                indent = src[pos] == '\t' ? (indent / 8 + 1) * 8 : indent + 1;
                ++pos;
            }
            if (pos >= n) {
                break;
            }
            if (src[pos] == '\n') {
                ++pos;
                continue; // blank line
            }
            if (src[pos] == '\r') {
                ++pos;
                continue;
            }
            if (src[pos] == '#') {
                while (pos < n && src[pos] != '\n') ++pos;
                continue; // comment-only line
            }
            begin_line(indent, line_start);
        }

        char c = src[pos];
        if (c == '\n') {
            if (bracket_stack.empty()) {
                end_line(pos);
            }
            ++pos;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++pos;
            continue;
        }
        if (c == '#') {
            while (pos < n && src[pos] != '\n') ++pos;
            continue;
        }
        if (c == '\\' && pos + 1 < n && (src[pos + 1] == '\n' || src[pos + 1] == '\r')) {
            pos += src[pos + 1] == '\r' && pos + 2 < n && src[pos + 2] == '\n' ? 3 : 2;
            continue; // explicit continuation
        }

        Token tok;
        tok.span.begin = pos;

        if (is_name_start(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < n && is_name_char(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string text(src.substr(start, pos - start));
            // String prefix directly followed by a quote folds into the string.
            if (is_string_prefix(text) && pos < n && (src[pos] == '"' || src[pos] == '\'')) {
                pos = start; // re-lex as a string below
            } else {
                tok.kind = TokKind::Name;
                tok.text = std::move(text);
                tok.keyword = python_keywords().count(tok.text) > 0;
                tok.call_exempt = tok.keyword;
                tok.span.end = pos;
                out.tokens.push_back(std::move(tok));
                continue;
            }
        }

        c = src[pos];
        if (c == '"' || c == '\'' ||
            (is_name_start(static_cast<unsigned char>(c)) /* string prefix */)) {
            std::size_t start = pos;
            while (pos < n && src[pos] != '"' && src[pos] != '\'') ++pos; // prefix
            char quote = src[pos];
            bool triple = pos + 2 < n && src[pos + 1] == quote && src[pos + 2] == quote;
            pos += triple ? 3 : 1;
            bool closed = false;
            while (pos < n) {
                if (src[pos] == '\\' && pos + 1 < n) {
                    pos += 2;
                    continue;
                }
                if (!triple && src[pos] == '\n') {
                    break;
                }
                if (src[pos] == quote) {
                    if (!triple) {
                        ++pos;
                        closed = true;
                        break;
                    }
                    if (pos + 2 < n && src[pos + 1] == quote && src[pos + 2] == quote) {
                        pos += 3;
                        closed = true;
                        break;
                    }
                }
                ++pos;
            }
            if (!closed) {
                out.errors.push_back({start, triple
                                                 ? "unterminated triple-quoted string"
                                                 : "unterminated string literal"});
            }
            tok.kind = TokKind::String;
            tok.span.end = pos;
            tok.text = std::string(src.substr(start, pos - start));
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < n && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                               src[pos] == '.' || src[pos] == '_')) {
                ++pos;
            }
            tok.kind = TokKind::Number;
            tok.span.end = pos;
            tok.text = std::string(src.substr(start, pos - start));
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (c == '(' || c == '[' || c == '{') {
            bracket_stack.push_back(c);
            bracket_offsets.push_back(pos);
        } else if (c == ')' || c == ']' || c == '}') {
            char open = c == ')' ? '(' : (c == ']' ? '[' : '{');
            if (bracket_stack.empty()) {
                out.errors.push_back({pos, std::string("unmatched '") + c + "'"});
            } else if (bracket_stack.back() != open) {
                out.errors.push_back(
                    {pos, std::string("closing bracket '") + c +
                              "' does not match opening bracket '" +
                              bracket_stack.back() + "'"});
                bracket_stack.pop_back();
                bracket_offsets.pop_back();
            } else {
                bracket_stack.pop_back();
                bracket_offsets.pop_back();
            }
        } else if (c == '`' || c == '$' || c == '?') {
            out.errors.push_back({pos, std::string("invalid character '") + c + "'"});
            ++pos;
            continue;
        }

        // Operator / punctuation; longest match first.
        std::string_view rest = src.substr(pos);
        std::size_t op_len = 1;
        for (const auto& op : kMultiOps) {
            if (op.size() <= rest.size() && rest.substr(0, op.size()) == op) {
                op_len = op.size();
                break;
            }
        }
        tok.kind = TokKind::Op;
        tok.text = std::string(src.substr(pos, op_len));
        pos += op_len;
        tok.span.end = pos;
        out.tokens.push_back(std::move(tok));
    }
    end_line(n);
    for (std::size_t i = 0; i < bracket_stack.size(); ++i) {
        out.errors.push_back({bracket_offsets[i],
                              std::string("'") + bracket_stack[i] + "' was never closed"});
    }
    return out;
}

// Soft keywords: match/case act as keywords only when they open a block.
bool line_is_soft_header(const Lexed& lx, const LogicalLine& line) {
    const Token& first = lx.tokens[line.tok_first];
    if (first.kind != TokKind::Name ||
        (first.text != "match" && first.text != "case")) {
        return false;
    }
    const Token& last = lx.tokens[line.tok_first + line.tok_count - 1];
    return line.tok_count >= 2 && last.kind == TokKind::Op && last.text == ":";
}

struct HeaderInfo {
    bool is_header = false;
    std::string kind;
    std::string name;
    long colon_index = -1; // absolute token index of the header colon
};

long find_header_colon(const Lexed& lx, const LogicalLine& line) {
    int depth = 0;
    for (std::size_t i = line.tok_first; i < line.tok_first + line.tok_count; ++i) {
        const Token& t = lx.tokens[i];
        if (t.kind != TokKind::Op) {
            continue;
        }
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            ++depth;
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            --depth;
        } else if (t.text == ":" && depth == 0) {
            return static_cast<long>(i);
        }
    }
    return -1;
}

HeaderInfo classify_header(const Lexed& lx, const LogicalLine& line) {
    HeaderInfo info;
    std::size_t i = line.tok_first;
    const Token& first = lx.tokens[i];
    if (first.kind != TokKind::Name) {
        return info;
    }
    std::string word = first.text;
    std::size_t name_at = i + 1;
    if (word == "async" && line.tok_count >= 2 &&
        lx.tokens[i + 1].kind == TokKind::Name) {
        word = lx.tokens[i + 1].text;
        name_at = i + 2;
    }
    static const std::unordered_set<std::string> compound{
        "def", "class", "if", "elif", "else", "for", "while",
        "try", "except", "finally", "with"};
    bool soft = line_is_soft_header(lx, line);
    if (compound.count(word) == 0 && !soft) {
        return info;
    }
    info.is_header = true;
    if (word == "def") {
        info.kind = "function_def";
    } else if (word == "class") {
        info.kind = "class_def";
    } else if (word == "if") {
        info.kind = "if_stmt";
    } else if (word == "elif") {
        info.kind = "elif_clause";
    } else if (word == "else") {
        info.kind = "else_clause";
    } else if (word == "for") {
        info.kind = "for_stmt";
    } else if (word == "while") {
        info.kind = "while_stmt";
    } else if (word == "try") {
        info.kind = "try_stmt";
    } else if (word == "except") {
        info.kind = "except_clause";
    } else if (word == "finally") {
        info.kind = "finally_clause";
    } else if (word == "with") {
        info.kind = "with_stmt";
    } else {
        info.kind = word == "match" ? "match_stmt" : "case_clause";
    }
    if ((info.kind == "function_def" || info.kind == "class_def") &&
        name_at < line.tok_first + line.tok_count &&
        lx.tokens[name_at].kind == TokKind::Name) {
        info.name = lx.tokens[name_at].text;
    }
    info.colon_index = find_header_colon(lx, line);
    return info;
}

std::string classify_simple(const Lexed& lx, std::size_t first, std::size_t count) {
    const Token& head = lx.tokens[first];
    if (head.kind == TokKind::Name && head.keyword) {
        if (head.text == "return") return "return_stmt";
        if (head.text == "raise") return "raise_stmt";
        if (head.text == "import" || head.text == "from") return "import_stmt";
    }
    int depth = 0;
    for (std::size_t i = first; i < first + count; ++i) {
        const Token& t = lx.tokens[i];
        if (t.kind != TokKind::Op) continue;
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        else if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
        else if (depth == 0 &&
                 (t.text == "=" || (t.text.size() >= 2 && t.text.back() == '=' &&
                                    t.text != "==" && t.text != "!=" &&
                                    t.text != "<=" && t.text != ">="))) {
            return "assign_stmt";
        }
    }
    return "expr_stmt";
}

// Two adjacent name-like tokens with no operator between them is not valid
// in any statement context; this is what rejects prose that reaches the
// parser (e.g. a reply preamble ahead of a code block).
void check_adjacent_names(const Lexed& lx, const LogicalLine& line, bool soft_header,
                          std::vector<PendingError>& errors) {
    for (std::size_t i = line.tok_first + 1; i < line.tok_first + line.tok_count; ++i) {
        const Token& a = lx.tokens[i - 1];
        const Token& b = lx.tokens[i];
        bool a_soft = soft_header && i - 1 == line.tok_first;
        bool a_namey = (a.kind == TokKind::Name && !a.keyword && !a_soft) ||
                       a.kind == TokKind::Number;
        bool b_namey = (b.kind == TokKind::Name && !b.keyword) ||
                       b.kind == TokKind::Number || b.kind == TokKind::String;
        if (a_namey && b_namey) {
            errors.push_back({b.span.begin, "invalid syntax"});
            return; // one report per line is enough
        }
    }
}

} // namespace

SyntaxTree parse_python(std::string_view src) {
    SyntaxTree tree;
    tree.language = corpus::Language::Python;
    Node root;
    root.kind = "module";
    root.span = {0, src.size()};
    root.head = {0, 0};
    tree.nodes.push_back(root);
    tree.root = 0;

    Lexed lx = lex(src);
    std::vector<PendingError> errors = std::move(lx.errors);

    // Indent stack: (block indent, owning node index).
    std::vector<std::pair<int, int>> stack{{0, 0}};
    long pending_header = -1; // node awaiting its indented block
    int pending_indent = 0;

    auto statement_span = [&](const LogicalLine& line) -> Span {
        const Token& first = lx.tokens[line.tok_first];
        const Token& last = lx.tokens[line.tok_first + line.tok_count - 1];
        return {first.span.begin, last.span.end};
    };

    for (const LogicalLine& line : lx.lines) {
        HeaderInfo header = classify_header(lx, line);
        check_adjacent_names(lx, line, line_is_soft_header(lx, line), errors);

        if (pending_header >= 0) {
            if (line.indent > pending_indent) {
                stack.emplace_back(line.indent, static_cast<int>(pending_header));
            } else {
                errors.push_back({statement_span(line).begin,
                                  "expected an indented block"});
            }
            pending_header = -1;
        }

        while (stack.size() > 1 && line.indent < stack.back().first) {
            stack.pop_back();
        }
        if (line.indent > stack.back().first) {
            errors.push_back({statement_span(line).begin, "unexpected indent"});
        } else if (line.indent != stack.back().first && stack.size() > 1) {
            errors.push_back({statement_span(line).begin,
                              "unindent does not match any outer indentation level"});
        }
        int parent = stack.back().second;

        Span span = statement_span(line);
        long signature_paren = -1;
        if (header.is_header &&
            (header.kind == "function_def" || header.kind == "class_def")) {
            // The parameter/base-list paren is not a call.
            for (std::size_t i = line.tok_first; i < line.tok_first + line.tok_count; ++i) {
                if (lx.tokens[i].kind == TokKind::Op && lx.tokens[i].text == "(") {
                    signature_paren = static_cast<long>(i);
                    break;
                }
            }
        }

        int node_index;
        if (header.is_header) {
            if (header.colon_index < 0) {
                errors.push_back({span.end, "expected ':'"});
            }
            Node node;
            node.kind = header.kind;
            node.name = header.name;
            node.span = span;
            node.head = {span.begin,
                         header.colon_index >= 0
                             ? lx.tokens[header.colon_index].span.end
                             : span.end};
            tree.nodes.push_back(std::move(node));
            node_index = static_cast<int>(tree.nodes.size()) - 1;
            tree.nodes[parent].children.push_back(node_index);

            bool has_inline_body =
                header.colon_index >= 0 &&
                static_cast<std::size_t>(header.colon_index + 1) <
                    line.tok_first + line.tok_count;
            if (has_inline_body) {
                std::size_t body_first = static_cast<std::size_t>(header.colon_index) + 1;
                std::size_t body_count = line.tok_first + line.tok_count - body_first;
                Node body;
                body.kind = classify_simple(lx, body_first, body_count);
                body.span = {lx.tokens[body_first].span.begin, span.end};
                body.head = body.span;
                tree.nodes.push_back(std::move(body));
                int body_index = static_cast<int>(tree.nodes.size()) - 1;
                tree.nodes[node_index].children.push_back(body_index);
            } else if (header.colon_index >= 0) {
                pending_header = node_index;
                pending_indent = line.indent;
            }
        } else {
            Node node;
            node.kind = classify_simple(lx, line.tok_first, line.tok_count);
            node.span = span;
            node.head = span;
            tree.nodes.push_back(std::move(node));
            node_index = static_cast<int>(tree.nodes.size()) - 1;
            tree.nodes[parent].children.push_back(node_index);
        }

        // Calls on this logical line attach to the statement (or its inline
        // body when present), nested by span containment.
        int call_parent = node_index;
        if (!tree.nodes[node_index].children.empty()) {
            call_parent = tree.nodes[node_index].children.back();
        }
        auto calls = collect_calls(tree, src, lx.tokens, line.tok_first,
                                   line.tok_first + line.tok_count, signature_paren);
        nest_calls(tree, call_parent, calls);
    }
    if (pending_header >= 0) {
        errors.push_back({src.size(), "expected an indented block"});
    }

    // Extend block spans over their children (bottom-up: children always have
    // larger indices than their parents here).
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        for (int child : tree.nodes[i].children) {
            tree.nodes[i].span.end =
                std::max(tree.nodes[i].span.end, tree.at(child).span.end);
            tree.nodes[i].span.begin =
                std::min(tree.nodes[i].span.begin, tree.at(child).span.begin);
        }
    }

    for (const auto& err : errors) {
        auto [line, col] = line_col(src, err.offset);
        tree.parse_errors.push_back({{err.offset, err.offset}, line, col, err.message});
    }
    std::sort(tree.parse_errors.begin(), tree.parse_errors.end(),
              [](const ParseError& a, const ParseError& b) {
                  return a.span.begin < b.span.begin;
              });
    return tree;
}

} // namespace cweseed::syntax::detail
