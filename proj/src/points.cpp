// SPDX-License-Identifier: Apache-2.0
#include "cweseed/points.hpp"

#include "cweseed/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace cweseed::points {

namespace {

std::vector<std::string> split_path(std::string_view dotted) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        std::size_t dot = dotted.find('.', start);
        if (dot == std::string_view::npos) {
            parts.emplace_back(dotted.substr(start));
            break;
        }
        parts.emplace_back(dotted.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

// Trailing-segment match: callee "a.b.c" matches entries "c", "b.c", "a.b.c".
bool callee_matches(std::string_view callee, std::string_view entry) {
    auto cs = split_path(callee);
    auto es = split_path(entry);
    if (es.empty() || es.size() > cs.size()) {
        return false;
    }
    return std::equal(es.rbegin(), es.rend(), cs.rbegin());
}

const std::string* match_any(std::string_view callee,
                             const std::vector<std::string>& entries) {
    for (const auto& entry : entries) {
        if (callee_matches(callee, entry)) {
            return &entry;
        }
    }
    return nullptr;
}

bool is_ident_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
}

// Word-boundary occurrence of a dotted name: "req.query" matches inside
// "req.query.name" (path extension) but not inside "req.queryx" or
// "user_input".
bool text_contains_path(std::string_view text, std::string_view entry) {
    std::size_t pos = 0;
    while ((pos = text.find(entry, pos)) != std::string_view::npos) {
        bool left_ok =
            pos == 0 || !is_ident_char(static_cast<unsigned char>(text[pos - 1]));
        std::size_t after = pos + entry.size();
        bool right_ok = after >= text.size() || text[after] == '.' ||
                        !is_ident_char(static_cast<unsigned char>(text[after]));
        if (left_ok && right_ok) {
            return true;
        }
        pos += 1;
    }
    return false;
}

int category_rank(Category c) {
    switch (c) {
    case Category::UncheckedInputBranch: return 0;
    case Category::UnsafeCall: return 1;
    case Category::UnderValidatedInteraction: return 2;
    }
    return 3;
}

} // namespace

std::string_view to_string(Category category) {
    switch (category) {
    case Category::UncheckedInputBranch: return "unchecked_input_branch";
    case Category::UnsafeCall: return "unsafe_call";
    case Category::UnderValidatedInteraction: return "under_validated_interaction";
    }
    return "unsafe_call";
}

HeuristicConfig HeuristicConfig::defaults() {
    HeuristicConfig config;
    LanguageHeuristics py;
    py.unsafe_calls = {"eval", "exec", "os.system", "os.popen", "pickle.load",
                       "pickle.loads", "yaml.load", "marshal.loads",
                       "subprocess.call", "subprocess.Popen", "subprocess.run"};
    py.input_sources = {"input", "sys.stdin.readline", "sys.stdin.read",
                        "sys.argv", "os.environ.get", "os.getenv",
                        "request.args.get", "request.form.get",
                        "request.values.get", "request.get_json"};
    py.sinks = {"execute", "executemany", "executescript", "os.system",
                "os.popen", "eval", "exec", "open", "send", "sendall",
                "subprocess.call", "subprocess.run"};
    config.languages["python"] = std::move(py);

    LanguageHeuristics js;
    js.unsafe_calls = {"eval", "Function", "execSync", "child_process.exec",
                       "child_process.execSync", "vm.runInThisContext",
                       "deserialize"};
    js.input_sources = {"req.query", "req.params", "req.body", "process.argv",
                        "process.env", "prompt", "readline",
                        "location.search", "document.cookie"};
    js.sinks = {"query", "execute", "exec", "send", "res.send", "res.write",
                "fs.writeFile", "fs.writeFileSync", "fs.readFile",
                "fs.readFileSync", "open", "innerHTML"};
    config.languages["javascript"] = std::move(js);
    return config;
}

HeuristicConfig HeuristicConfig::load(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) {
        throw Error("FileNotFound", "cannot open " + json_path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, true, true);
    HeuristicConfig config;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        LanguageHeuristics lang;
        const auto& body = it.value();
        for (const auto& v : body.value("unsafe_calls", nlohmann::json::array())) {
            lang.unsafe_calls.push_back(v.get<std::string>());
        }
        for (const auto& v : body.value("input_sources", nlohmann::json::array())) {
            lang.input_sources.push_back(v.get<std::string>());
        }
        for (const auto& v : body.value("sinks", nlohmann::json::array())) {
            lang.sinks.push_back(v.get<std::string>());
        }
        lang.interaction_window = body.value("interaction_window", 5);
        config.languages[it.key()] = std::move(lang);
    }
    return config;
}

const LanguageHeuristics* HeuristicConfig::for_language(corpus::Language lang) const {
    auto it = languages.find(std::string(corpus::to_string(lang)));
    return it == languages.end() ? nullptr : &it->second;
}

std::vector<InjectionPoint> discover_injection_points(
    const syntax::SyntaxTree& tree, const corpus::SubmissionFile& file,
    const HeuristicConfig& config) {
    if (!tree.clean()) {
        throw Error("DirtyTree", "tree has parse errors; fix the source first");
    }
    const LanguageHeuristics* rules = config.for_language(file.language);
    if (rules == nullptr) {
        return {};
    }
    const std::string& src = file.content;
    auto snippet_of = [&](syntax::Span span) {
        return src.substr(span.begin, span.end - span.begin);
    };
    auto line_of = [&](std::size_t offset) {
        return syntax::line_col(src, offset).first;
    };

    std::vector<InjectionPoint> out;
    auto add = [&](Category cat, syntax::Span span, const std::string& kind,
                   const std::string& hint) {
        InjectionPoint p;
        p.category = cat;
        p.start_line = line_of(span.begin);
        p.end_line = span.end > span.begin ? line_of(span.end - 1) : p.start_line;
        p.node_kind = kind;
        p.snippet = snippet_of(span);
        p.sink_hint = hint;
        out.push_back(std::move(p));
    };

    // Pass 1: calls (unsafe calls, and source/sink locations for pass 2).
    struct Located {
        std::string callee;
        syntax::Span span;
        int line;
    };
    std::vector<Located> source_calls, sink_calls;
    syntax::walk(tree, [&](int, const syntax::Node& node) {
        if (node.kind == "call") {
            if (const auto* hit = match_any(node.name, rules->unsafe_calls)) {
                add(Category::UnsafeCall, node.span, node.kind, *hit);
            }
            if (match_any(node.name, rules->input_sources) != nullptr) {
                source_calls.push_back({node.name, node.span, line_of(node.span.begin)});
            }
            if (const auto* hit = match_any(node.name, rules->sinks)) {
                sink_calls.push_back({*hit, node.span, line_of(node.span.begin)});
            }
        } else if (node.kind == "if_stmt" || node.kind == "elif_clause" ||
                   node.kind == "while_stmt") {
            std::string head = snippet_of(node.head);
            for (const auto& source : rules->input_sources) {
                if (text_contains_path(head, source)) {
                    add(Category::UncheckedInputBranch, node.head, node.kind, source);
                    break;
                }
            }
        }
    });

    // Pass 2: textual source-read lines (attribute reads like req.query.name
    // have no call node), then sinks within the interaction window.
    std::set<int> source_lines;
    for (const auto& call : source_calls) {
        source_lines.insert(call.line);
    }
    {
        std::size_t line_start = 0;
        int line_no = 1;
        while (line_start <= src.size()) {
            std::size_t nl = src.find('\n', line_start);
            std::size_t line_end = nl == std::string::npos ? src.size() : nl;
            std::string_view line(src.data() + line_start, line_end - line_start);
            for (const auto& source : rules->input_sources) {
                if (text_contains_path(line, source)) {
                    source_lines.insert(line_no);
                    break;
                }
            }
            if (nl == std::string::npos) {
                break;
            }
            line_start = nl + 1;
            ++line_no;
        }
    }
    for (const auto& sink : sink_calls) {
        for (int line : source_lines) {
            if (sink.line >= line && sink.line - line <= rules->interaction_window) {
                add(Category::UnderValidatedInteraction, sink.span, "call",
                    sink.callee);
                break;
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const InjectionPoint& a, const InjectionPoint& b) {
        if (a.start_line != b.start_line) return a.start_line < b.start_line;
        if (category_rank(a.category) != category_rank(b.category)) {
            return category_rank(a.category) < category_rank(b.category);
        }
        return a.sink_hint < b.sink_hint;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const InjectionPoint& a, const InjectionPoint& b) {
                              return a.category == b.category &&
                                     a.start_line == b.start_line &&
                                     a.end_line == b.end_line &&
                                     a.sink_hint == b.sink_hint;
                          }),
              out.end());
    return out;
}

std::string describe_points(const std::vector<InjectionPoint>& points) {
    std::string out;
    for (const auto& p : points) {
        out += "- lines ";
        out += std::to_string(p.start_line);
        out += "-";
        out += std::to_string(p.end_line);
        out += " [";
        out += to_string(p.category);
        out += "]";
        if (!p.sink_hint.empty()) {
            out += " near ";
            out += p.sink_hint;
        }
        out += ": ";
        std::string snippet = p.snippet.substr(0, 120);
        for (char& c : snippet) {
            if (c == '\n') {
                c = ' ';
            }
        }
        out += snippet;
        out += "\n";
    }
    return out;
}

} // namespace cweseed::points
