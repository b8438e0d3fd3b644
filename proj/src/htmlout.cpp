// SPDX-License-Identifier: Apache-2.0
#include "cweseed/htmlout.hpp"

#include "cweseed/error.hpp"
#include "cweseed/textdiff.hpp"

#include <sstream>

namespace cweseed::html {

namespace {

constexpr std::string_view kStyle = R"css(
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 60rem;
       color: #1c1c1c; }
h1 { font-size: 1.4rem; }
h2 { font-size: 1.1rem; margin-top: 1.6rem; }
p.meta { color: #555; }
table.code { border-collapse: collapse; width: 100%;
             font-family: "SFMono-Regular", Consolas, monospace;
             font-size: 0.85rem; background: #fafafa;
             border: 1px solid #ddd; }
table.code td { padding: 0 0.6rem; white-space: pre; }
td.num { text-align: right; color: #999; user-select: none;
         border-right: 1px solid #ddd; width: 3rem; }
tr.changed td.line { background: #fff3c4; }
tr.changed td.num { color: #b58900; font-weight: bold; }
div.item { border: 1px solid #ddd; padding: 0.8rem 1rem; margin: 0.8rem 0;
           background: #fcfcfc; }
span.tag { font-size: 0.75rem; color: #666; border: 1px solid #ccc;
           padding: 0 0.4rem; border-radius: 3px; margin-left: 0.5rem; }
ol.options li { margin: 0.25rem 0; }
ol.options li.correct { font-weight: bold; }
)css";

// Replace every occurrence of `needle` (case-sensitive) in text already
// escaped upstream; used to scrub CWE identity in challenge mode.
void scrub(std::string& text, const std::string& needle) {
    if (needle.empty()) {
        return;
    }
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), "(redacted)");
        pos += 10;
    }
}

bool line_changed(int line, const std::vector<textdiff::LineRange>& regions) {
    for (const auto& r : regions) {
        if (line >= r.first && line <= r.last) {
            return true;
        }
    }
    return false;
}

void emit_code_table(std::ostringstream& out, const std::string& code,
                     const std::vector<textdiff::LineRange>& regions) {
    out << "<table class=\"code\">\n";
    auto lines = textdiff::split_lines(code);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        bool changed = line_changed(line_no, regions);
        out << (changed ? "<tr class=\"changed\">" : "<tr>");
        out << "<td class=\"num\">" << line_no << "</td>";
        out << "<td class=\"line\">" << escape(lines[i]) << "</td></tr>\n";
    }
    out << "</table>\n";
}

} // namespace

std::string_view to_string(RenderMode mode) {
    return mode == RenderMode::Challenge ? "challenge" : "explained";
}

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out.push_back(c); break;
        }
    }
    return out;
}

HtmlArtifact render_candidate_html(
    const injector::InjectionCandidate& candidate,
    const std::optional<outcomes::LearningArtifact>& artifact, RenderMode mode) {
    if (mode == RenderMode::Explained && !artifact.has_value()) {
        throw Error("MissingArtifact",
                    "explained mode needs a learning artifact for " +
                        candidate.candidate_id);
    }

    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n"
        << "<meta charset=\"utf-8\">\n"
        << "<title>Code review exercise</title>\n"
        << "<style>" << kStyle << "</style>\n</head>\n<body>\n";

    if (mode == RenderMode::Challenge) {
        out << "<h1>Code review exercise</h1>\n"
            << "<p class=\"meta\">File: <strong>" << escape(candidate.file_path)
            << "</strong></p>\n"
            << "<p>A security flaw has been introduced somewhere in this "
               "version of your own submission. The highlighted lines differ "
               "from what you handed in. Read the code, work out what an "
               "attacker could do with it, and how you would fix it.</p>\n";
    } else {
        out << "<h1>" << escape(candidate.cwe.id) << " &mdash; "
            << escape(candidate.cwe.name) << "</h1>\n"
            << "<p class=\"meta\">File: <strong>" << escape(candidate.file_path)
            << "</strong></p>\n"
            << "<p>" << escape(candidate.cwe.description) << "</p>\n";
        if (!candidate.rationale.empty()) {
            out << "<div class=\"item\"><h2>Where the flaw lives</h2><p>"
                << escape(candidate.rationale) << "</p></div>\n";
        }
    }

    out << "<h2>Code</h2>\n";
    emit_code_table(out, candidate.injected_code, candidate.changed_regions);

    if (mode == RenderMode::Explained) {
        const auto& a = *artifact;
        auto tag_of = [&](const std::string& item) -> std::string {
            for (const auto& [name, level] : a.bloom_tags) {
                if (name == item) {
                    return std::string(outcomes::to_string(level));
                }
            }
            return "";
        };
        out << "<div class=\"item\"><h2>Explanation"
            << "<span class=\"tag\">" << escape(tag_of("explanation"))
            << "</span></h2><p>" << escape(a.explanation) << "</p></div>\n";
        out << "<div class=\"item\"><h2>Check your understanding"
            << "<span class=\"tag\">" << escape(tag_of("mcq")) << "</span></h2>"
            << "<p>" << escape(a.mcq.stem) << "</p>\n<ol class=\"options\">\n";
        for (std::size_t i = 0; i < a.mcq.options.size(); ++i) {
            bool correct = static_cast<int>(i) == a.mcq.correct_index;
            out << (correct ? "<li class=\"correct\">" : "<li>")
                << escape(a.mcq.options[i]);
            if (correct) {
                out << " &#10003;";
            }
            out << "</li>\n";
        }
        out << "</ol>\n";
        out << "<p class=\"meta\">Why the other options tempt people:</p><ul>\n";
        for (const auto& r : a.mcq.distractor_rationales) {
            out << "<li>" << escape(r) << "</li>\n";
        }
        out << "</ul></div>\n";
        out << "<div class=\"item\"><h2>Reflect"
            << "<span class=\"tag\">" << escape(tag_of("reflection"))
            << "</span></h2><p>" << escape(a.reflection_prompt) << "</p></div>\n";
    }

    out << "</body>\n</html>\n";

    HtmlArtifact result;
    result.candidate_id = candidate.candidate_id;
    result.mode = mode;
    result.document = out.str();
    if (mode == RenderMode::Challenge) {
        // The invariant is absolute: the document must not leak the weakness
        // identity even if the model slipped it into code or rationale.
        scrub(result.document, escape(candidate.cwe.id));
        scrub(result.document, escape(candidate.cwe.name));
        if (!candidate.cwe.description.empty()) {
            scrub(result.document, escape(candidate.cwe.description));
        }
        std::string bare = candidate.cwe.id.substr(4); // "89" from "CWE-89"
        scrub(result.document, "CWE-" + bare);
    }
    return result;
}

} // namespace cweseed::html
