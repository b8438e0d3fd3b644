// SPDX-License-Identifier: Apache-2.0
//
// Error-tolerant structural JavaScript grammar: bracket-matched structure
// with function/class/branch/loop/try nodes and call expressions. Template
// literals (including ${} nesting) and regex literals lex as opaque strings.
#include "cweseed/syntax.hpp"

#include "syntax_internal.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <unordered_set>

namespace cweseed::syntax::detail {

namespace {

const std::unordered_set<std::string>& js_reserved() {
    static const std::unordered_set<std::string> kw{
        "break",   "case",    "catch",   "class",   "const",    "continue",
        "debugger","default", "delete",  "do",      "else",     "export",
        "extends", "finally", "for",     "function","if",       "import",
        "in",      "instanceof","new",   "return",  "super",    "switch",
        "this",    "throw",   "try",     "typeof",  "var",      "void",
        "while",   "with",    "yield",   "let",     "static",   "get",
        "set",     "of",      "as",      "from",    "async",    "await",
        "null",    "true",    "false",   "undefined",
    };
    return kw;
}

// Subset that may not directly precede a call paren. Contextual words like
// get/set/from stay callable: Array.from(...), map.get(...) are real calls.
const std::unordered_set<std::string>& js_call_exempt() {
    static const std::unordered_set<std::string> kw{
        "if", "for", "while", "switch", "catch", "return", "typeof", "delete",
        "void", "in", "instanceof", "do", "else", "case", "throw", "new",
        "await", "yield", "function", "with",
    };
    return kw;
}

bool is_name_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

const std::array<std::string_view, 24> kMultiOps = {
    ">>>=", "===", "!==", "**=", "<<=", ">>=", "...", "=>", "==", "!=",
    "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "**",
};

struct PendingError {
    std::size_t offset;
    std::string message;
};

struct Lexed {
    std::vector<Token> tokens;
    std::vector<PendingError> errors;
};

bool regex_can_start(const std::vector<Token>& tokens) {
    if (tokens.empty()) {
        return true;
    }
    const Token& prev = tokens.back();
    if (prev.kind == TokKind::Name) {
        return prev.keyword && prev.text != "this" && prev.text != "super";
    }
    if (prev.kind == TokKind::Number || prev.kind == TokKind::String) {
        return false;
    }
    return prev.text != ")" && prev.text != "]" && prev.text != "}";
}

// Scans a template literal starting at the opening backtick; handles ${}
// nesting with inner strings and nested templates. Returns one past the
// closing backtick, or npos when unterminated.
std::size_t scan_template(std::string_view src, std::size_t pos) {
    const std::size_t n = src.size();
    ++pos; // opening backtick
    while (pos < n) {
        char c = src[pos];
        if (c == '\\' && pos + 1 < n) {
            pos += 2;
            continue;
        }
        if (c == '`') {
            return pos + 1;
        }
        if (c == '$' && pos + 1 < n && src[pos + 1] == '{') {
            pos += 2;
            int depth = 1;
            while (pos < n && depth > 0) {
                char d = src[pos];
                if (d == '\\' && pos + 1 < n) {
                    pos += 2;
                    continue;
                }
                if (d == '\'' || d == '"') {
                    ++pos;
                    while (pos < n && src[pos] != d && src[pos] != '\n') {
                        pos += src[pos] == '\\' ? 2 : 1;
                    }
                    if (pos < n) ++pos;
                    continue;
                }
                if (d == '`') {
                    std::size_t inner = scan_template(src, pos);
                    if (inner == std::string_view::npos) {
                        return std::string_view::npos;
                    }
                    pos = inner;
                    continue;
                }
                if (d == '{') ++depth;
                if (d == '}') --depth;
                ++pos;
            }
            continue;
        }
        ++pos;
    }
    return std::string_view::npos;
}

Lexed lex(std::string_view src) {
    Lexed out;
    std::size_t pos = 0;
    const std::size_t n = src.size();

    std::vector<char> bracket_stack;
    std::vector<std::size_t> bracket_offsets;

    if (n >= 2 && src[0] == '#' && src[1] == '!') {
        while (pos < n && src[pos] != '\n') ++pos; // shebang
    }

    while (pos < n) {
        char c = src[pos];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
            continue;
        }
        if (c == '/' && pos + 1 < n && src[pos + 1] == '/') {
            while (pos < n && src[pos] != '\n') ++pos;
            continue;
        }
        if (c == '/' && pos + 1 < n && src[pos + 1] == '*') {
            std::size_t start = pos;
            pos += 2;
            bool closed = false;
            while (pos + 1 < n) {
                if (src[pos] == '*' && src[pos + 1] == '/') {
                    pos += 2;
                    closed = true;
                    break;
                }
                ++pos;
            }
            if (!closed) {
                out.errors.push_back({start, "unterminated block comment"});
                pos = n;
            }
            continue;
        }

        Token tok;
        tok.span.begin = pos;

        if (is_name_start(static_cast<unsigned char>(c)) ||
            (c == '#' && pos + 1 < n &&
             is_name_start(static_cast<unsigned char>(src[pos + 1])))) {
            if (c == '#') ++pos; // private field name
            std::size_t start = tok.span.begin;
            while (pos < n && is_name_char(static_cast<unsigned char>(src[pos]))) ++pos;
            tok.kind = TokKind::Name;
            tok.text = std::string(src.substr(start, pos - start));
            if (tok.text[0] == '#') {
                tok.text.erase(0, 1);
            }
            tok.keyword = js_reserved().count(tok.text) > 0;
            tok.call_exempt = js_call_exempt().count(tok.text) > 0;
            tok.span.end = pos;
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos + 1 < n && std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
            std::size_t start = pos;
            while (pos < n && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                               src[pos] == '.' || src[pos] == '_')) {
                ++pos;
            }
            tok.kind = TokKind::Number;
            tok.text = std::string(src.substr(start, pos - start));
            tok.span.end = pos;
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (c == '\'' || c == '"') {
            std::size_t start = pos;
            ++pos;
            bool closed = false;
            while (pos < n && src[pos] != '\n') {
                if (src[pos] == '\\' && pos + 1 < n) {
                    pos += 2;
                    continue;
                }
                if (src[pos] == c) {
                    ++pos;
                    closed = true;
                    break;
                }
                ++pos;
            }
            if (!closed) {
                out.errors.push_back({start, "unterminated string literal"});
            }
            tok.kind = TokKind::String;
            tok.text = std::string(src.substr(start, pos - start));
            tok.span.end = pos;
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (c == '`') {
            std::size_t end = scan_template(src, pos);
            if (end == std::string_view::npos) {
                out.errors.push_back({pos, "unterminated template literal"});
                end = n;
            }
            tok.kind = TokKind::String;
            tok.text = std::string(src.substr(pos, end - pos));
            tok.span.end = end;
            pos = end;
            out.tokens.push_back(std::move(tok));
            continue;
        }

        if (c == '/' && regex_can_start(out.tokens)) {
            std::size_t start = pos;
            ++pos;
            bool in_class = false, closed = false;
            while (pos < n && src[pos] != '\n') {
                char d = src[pos];
                if (d == '\\' && pos + 1 < n) {
                    pos += 2;
                    continue;
                }
                if (d == '[') in_class = true;
                else if (d == ']') in_class = false;
                else if (d == '/' && !in_class) {
                    ++pos;
                    while (pos < n && std::isalpha(static_cast<unsigned char>(src[pos]))) {
                        ++pos; // flags
                    }
                    closed = true;
                    break;
                }
                ++pos;
            }
            if (!closed) {
                out.errors.push_back({start, "unterminated regular expression"});
            }
            tok.kind = TokKind::String;
            tok.text = std::string(src.substr(start, pos - start));
            tok.span.end = pos;
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
        } else if (c == '@' || c == '\\') {
            out.errors.push_back({pos, std::string("invalid character '") + c + "'"});
            ++pos;
            continue;
        }

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
    for (std::size_t i = 0; i < bracket_stack.size(); ++i) {
        out.errors.push_back({bracket_offsets[i],
                              std::string("'") + bracket_stack[i] + "' was never closed"});
    }
    return out;
}

// Two adjacent plain identifiers on one line are never valid JS; across
// lines ASI may legitimately separate them, so only same-line pairs count.
// This is what rejects prose fed to the parser. Tagged templates
// (NAME `...`) are legal, so strings after names pass.
void check_adjacent_names(std::string_view src, const std::vector<Token>& tokens,
                          std::vector<PendingError>& errors) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& a = tokens[i - 1];
        const Token& b = tokens[i];
        bool a_namey = (a.kind == TokKind::Name && !a.keyword) ||
                       a.kind == TokKind::Number;
        bool b_namey = (b.kind == TokKind::Name && !b.keyword) ||
                       b.kind == TokKind::Number;
        if (!a_namey || !b_namey) {
            continue;
        }
        std::size_t newline = src.find('\n', a.span.end);
        if (newline == std::string_view::npos || newline >= b.span.begin) {
            errors.push_back({b.span.begin, "unexpected identifier"});
            return;
        }
    }
}

struct Builder {
    const std::vector<Token>& tokens;
    SyntaxTree& tree;

    std::size_t match_forward(std::size_t open_index, std::size_t last) const {
        // index of the token matching the bracket at open_index, or last.
        int depth = 0;
        const std::string& open = tokens[open_index].text;
        std::string close = open == "(" ? ")" : (open == "[" ? "]" : "}");
        for (std::size_t i = open_index; i < last; ++i) {
            if (tokens[i].kind != TokKind::Op) continue;
            if (tokens[i].text == open) ++depth;
            else if (tokens[i].text == close) {
                --depth;
                if (depth == 0) return i;
            }
        }
        return last;
    }

    std::size_t statement_end(std::size_t from, std::size_t last) const {
        int depth = 0;
        for (std::size_t i = from; i < last; ++i) {
            const Token& t = tokens[i];
            if (t.kind != TokKind::Op) continue;
            if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
            else if (t.text == ")" || t.text == "]" || t.text == "}") {
                if (depth == 0) return i; // statement ends at enclosing close
                --depth;
            } else if (t.text == ";" && depth == 0) {
                return i + 1;
            }
        }
        return last;
    }

    int add_node(std::string kind, Span span, Span head, std::string name, int parent) {
        Node node;
        node.kind = std::move(kind);
        node.span = span;
        node.head = head;
        node.name = std::move(name);
        tree.nodes.push_back(std::move(node));
        int index = static_cast<int>(tree.nodes.size()) - 1;
        tree.nodes[parent].children.push_back(index);
        return index;
    }

    // Parses tokens[first,last) attaching structural nodes to parent.
    // class_body switches to method-definition recognition.
    void region(std::size_t first, std::size_t last, int parent, bool class_body) {
        std::size_t i = first;
        while (i < last) {
            const Token& t = tokens[i];
            if (t.kind == TokKind::Name && t.keyword) {
                if (t.text == "function") {
                    i = function_decl(i, last, parent);
                    continue;
                }
                if (t.text == "class") {
                    i = class_decl(i, last, parent);
                    continue;
                }
                if (t.text == "if" || t.text == "while" || t.text == "switch" ||
                    t.text == "for") {
                    i = control(i, last, parent);
                    continue;
                }
                if (t.text == "do") {
                    i = do_while(i, last, parent);
                    continue;
                }
                if (t.text == "try") {
                    i = try_stmt(i, last, parent);
                    continue;
                }
                if (t.text == "return" || t.text == "throw") {
                    std::size_t end = statement_end(i + 1, last);
                    add_node(t.text == "return" ? "return_stmt" : "throw_stmt",
                             {t.span.begin, end > i ? tokens[end - 1].span.end : t.span.end},
                             {t.span.begin, t.span.end}, "", parent);
                    i = std::max(end, i + 1);
                    continue;
                }
                if (t.text == "const" || t.text == "let" || t.text == "var") {
                    std::size_t end = statement_end(i + 1, last);
                    std::string name;
                    if (i + 1 < last && tokens[i + 1].kind == TokKind::Name) {
                        name = tokens[i + 1].text;
                    }
                    int node = add_node(
                        "decl_stmt",
                        {t.span.begin, end > i ? tokens[end - 1].span.end : t.span.end},
                        {t.span.begin, t.span.end}, name, parent);
                    // Initializer may hold function/arrow bodies.
                    scan_expressions(i + 1, end, node);
                    i = std::max(end, i + 1);
                    continue;
                }
            }
            bool methodish_name =
                t.kind == TokKind::Name &&
                (!t.keyword || t.text == "get" || t.text == "set" ||
                 t.text == "static" || t.text == "async" || t.text == "of" ||
                 t.text == "from" || t.text == "as");
            if (class_body && methodish_name) {
                // method shorthand: NAME ( params ) { body }
                std::size_t j = i + 1;
                if (j < last && tokens[j].text == "(") {
                    std::size_t close = match_forward(j, last);
                    std::size_t b = close + 1;
                    if (b < last && tokens[b].text == "{") {
                        std::size_t body_close = match_forward(b, last);
                        int node = add_node("function_def",
                                            {t.span.begin, tokens[body_close].span.end},
                                            {t.span.begin, tokens[close].span.end},
                                            t.text, parent);
                        region(b + 1, body_close, node, false);
                        i = body_close + 1;
                        continue;
                    }
                }
            }
            if (t.kind == TokKind::Op && t.text == "=>") {
                i = arrow(i, first, last, parent);
                continue;
            }
            if (t.kind == TokKind::Op && t.text == "{" && !class_body) {
                // bare block or object literal; recurse to catch nested structure
                std::size_t close = match_forward(i, last);
                region(i + 1, close, parent, false);
                i = close + 1;
                continue;
            }
            ++i;
        }
    }

    // Handles expressions inside declarations: function expressions, arrows,
    // object literals with methods.
    void scan_expressions(std::size_t first, std::size_t last, int parent) {
        region(first, last, parent, false);
    }

    std::size_t function_decl(std::size_t kw, std::size_t last, int parent) {
        std::size_t i = kw + 1;
        if (i < last && tokens[i].kind == TokKind::Op && tokens[i].text == "*") {
            ++i;
        }
        std::string name;
        if (i < last && tokens[i].kind == TokKind::Name && !tokens[i].keyword) {
            name = tokens[i].text;
            ++i;
        }
        if (i >= last || tokens[i].text != "(") {
            add_node("function_def", tokens[kw].span, tokens[kw].span, name, parent);
            return kw + 1;
        }
        std::size_t params_close = match_forward(i, last);
        std::size_t b = params_close + 1;
        if (b < last && tokens[b].text == "{") {
            std::size_t body_close = match_forward(b, last);
            int node = add_node("function_def",
                                {tokens[kw].span.begin, tokens[body_close].span.end},
                                {tokens[kw].span.begin, tokens[params_close].span.end},
                                name, parent);
            region(b + 1, body_close, node, false);
            return body_close + 1;
        }
        add_node("function_def",
                 {tokens[kw].span.begin, tokens[params_close].span.end},
                 {tokens[kw].span.begin, tokens[params_close].span.end}, name, parent);
        return params_close + 1;
    }

    std::size_t class_decl(std::size_t kw, std::size_t last, int parent) {
        std::size_t i = kw + 1;
        std::string name;
        if (i < last && tokens[i].kind == TokKind::Name && !tokens[i].keyword) {
            name = tokens[i].text;
            ++i;
        }
        while (i < last && tokens[i].text != "{") {
            ++i; // extends clause
        }
        if (i >= last) {
            add_node("class_def", tokens[kw].span, tokens[kw].span, name, parent);
            return kw + 1;
        }
        std::size_t close = match_forward(i, last);
        int node = add_node("class_def",
                            {tokens[kw].span.begin, tokens[close].span.end},
                            {tokens[kw].span.begin, tokens[i].span.begin}, name, parent);
        region(i + 1, close, node, true);
        return close + 1;
    }

    std::size_t control(std::size_t kw, std::size_t last, int parent) {
        const std::string& word = tokens[kw].text;
        std::string kind = word == "if"      ? "if_stmt"
                           : word == "while" ? "while_stmt"
                           : word == "for"   ? "for_stmt"
                                             : "switch_stmt";
        std::size_t i = kw + 1;
        Span head = tokens[kw].span;
        if (i < last && tokens[i].text == "(") {
            std::size_t close = match_forward(i, last);
            head = {tokens[kw].span.begin,
                    close < last ? tokens[close].span.end : tokens[kw].span.end};
            i = close + 1;
        }
        Span span = {tokens[kw].span.begin, head.end};
        int node = add_node(kind, span, head, "", parent);
        if (i < last && tokens[i].text == "{") {
            std::size_t close = match_forward(i, last);
            tree.nodes[node].span.end = tokens[close].span.end;
            region(i + 1, close, node, false);
            i = close + 1;
        } else if (i < last) {
            std::size_t end = statement_end(i, last);
            tree.nodes[node].span.end = end > i ? tokens[end - 1].span.end : head.end;
            region(i, end, node, false);
            i = std::max(end, i + 1);
        }
        // else-clause: attach its block to the same node; "else if" chains
        // surface as sibling if_stmt nodes.
        if (kind == "if_stmt" && i < last && tokens[i].kind == TokKind::Name &&
            tokens[i].text == "else") {
            ++i;
            if (i < last && tokens[i].text == "{") {
                std::size_t close = match_forward(i, last);
                tree.nodes[node].span.end = tokens[close].span.end;
                region(i + 1, close, node, false);
                i = close + 1;
            }
            // "else if" falls through: the next iteration of region() picks
            // up the if keyword as a fresh statement.
        }
        return i;
    }

    std::size_t do_while(std::size_t kw, std::size_t last, int parent) {
        std::size_t i = kw + 1;
        int node = add_node("while_stmt", tokens[kw].span, tokens[kw].span, "", parent);
        if (i < last && tokens[i].text == "{") {
            std::size_t close = match_forward(i, last);
            tree.nodes[node].span.end = tokens[close].span.end;
            region(i + 1, close, node, false);
            i = close + 1;
        }
        std::size_t end = statement_end(i, last);
        if (end > i) {
            tree.nodes[node].span.end = tokens[end - 1].span.end;
        }
        return std::max(end, i + 1);
    }

    std::size_t try_stmt(std::size_t kw, std::size_t last, int parent) {
        int node = add_node("try_stmt", tokens[kw].span, tokens[kw].span, "", parent);
        std::size_t i = kw + 1;
        while (i < last) {
            if (tokens[i].text == "{") {
                std::size_t close = match_forward(i, last);
                tree.nodes[node].span.end = tokens[close].span.end;
                region(i + 1, close, node, false);
                i = close + 1;
                continue;
            }
            if (tokens[i].kind == TokKind::Name &&
                (tokens[i].text == "catch" || tokens[i].text == "finally")) {
                ++i;
                if (i < last && tokens[i].text == "(") {
                    i = match_forward(i, last) + 1;
                }
                continue;
            }
            break;
        }
        return i;
    }

    std::size_t arrow(std::size_t op, std::size_t first, std::size_t last, int parent) {
        // Span from the parameter list (or single name) through the body.
        Span span = tokens[op].span;
        if (op > first) {
            const Token& prev = tokens[op - 1];
            if (prev.kind == TokKind::Op && prev.text == ")") {
                int depth = 0;
                for (std::size_t j = op - 1; j + 1 > first; --j) {
                    if (tokens[j].text == ")") ++depth;
                    else if (tokens[j].text == "(") {
                        --depth;
                        if (depth == 0) {
                            span.begin = tokens[j].span.begin;
                            break;
                        }
                    }
                    if (j == first) break;
                }
            } else if (prev.kind == TokKind::Name) {
                span.begin = prev.span.begin;
            }
        }
        int node = add_node("arrow_function", span, tokens[op].span, "", parent);
        std::size_t i = op + 1;
        if (i < last && tokens[i].text == "{") {
            std::size_t close = match_forward(i, last);
            tree.nodes[node].span.end = tokens[close].span.end;
            region(i + 1, close, node, false);
            return close + 1;
        }
        std::size_t end = statement_end(i, last);
        if (end > i) {
            tree.nodes[node].span.end = tokens[end - 1].span.end;
        }
        return i; // expression body: let region() continue scanning inside it
    }
};

} // namespace

SyntaxTree parse_javascript(std::string_view src) {
    SyntaxTree tree;
    tree.language = corpus::Language::JavaScript;
    Node root;
    root.kind = "module";
    root.span = {0, src.size()};
    root.head = {0, 0};
    tree.nodes.push_back(root);
    tree.root = 0;

    Lexed lx = lex(src);
    std::vector<PendingError> errors = std::move(lx.errors);
    check_adjacent_names(src, lx.tokens, errors);

    Builder builder{lx.tokens, tree};
    builder.region(0, lx.tokens.size(), 0, false);

    // Call expressions: collect over the whole stream, excluding parameter
    // lists of function/method definitions (their heads cover those parens),
    // then attach each call to the deepest structural node containing it.
    std::vector<int> structural;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        structural.push_back(static_cast<int>(i));
    }

    std::vector<bool> skip(lx.tokens.size(), false);
    for (int idx : structural) {
        const Node& node = tree.at(idx);
        if (node.kind != "function_def") {
            continue;
        }
        for (std::size_t t = 0; t < lx.tokens.size(); ++t) {
            const Token& tok = lx.tokens[t];
            if (tok.kind == TokKind::Op && tok.text == "(" &&
                tok.span.begin >= node.head.begin && tok.span.end <= node.head.end) {
                skip[t] = true;
                break; // only the parameter-list paren, not calls in defaults
            }
        }
    }
    auto calls = collect_calls(tree, src, lx.tokens, 0, lx.tokens.size(), -1, &skip);

    // Deepest containing structural node per call.
    std::vector<std::pair<int, int>> call_owner; // (owner, call)
    for (int call : calls) {
        Span span = tree.at(call).span;
        int owner = 0;
        for (int idx : structural) {
            const Node& node = tree.at(idx);
            if (node.kind == "call") continue;
            if (node.span.begin <= span.begin && span.end <= node.span.end) {
                const Node& cur = tree.at(owner);
                if (node.span.end - node.span.begin <= cur.span.end - cur.span.begin) {
                    owner = idx;
                }
            }
        }
        call_owner.emplace_back(owner, call);
    }
    std::stable_sort(call_owner.begin(), call_owner.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t i = 0;
    while (i < call_owner.size()) {
        std::size_t j = i;
        std::vector<int> group;
        while (j < call_owner.size() && call_owner[j].first == call_owner[i].first) {
            group.push_back(call_owner[j].second);
            ++j;
        }
        std::sort(group.begin(), group.end(), [&](int a, int b) {
            return tree.at(a).span.begin < tree.at(b).span.begin;
        });
        nest_calls(tree, call_owner[i].first, group);
        i = j;
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
