// SPDX-License-Identifier: Apache-2.0
#include "cweseed/tomlmini.hpp"

#include "cweseed/error.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cweseed::tomlmini {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw Error("ParseError", "line " + std::to_string(line) + ": " + message);
}

// Parses a "..." string starting at pos (the opening quote). Returns the
// content and advances pos past the closing quote.
std::string parse_basic_string(std::string_view text, std::size_t& pos, int line) {
    std::string out;
    ++pos; // opening quote
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '"') {
            ++pos;
            return out;
        }
        if (c == '\\') {
            if (pos + 1 >= text.size()) {
                break;
            }
            char esc = text[++pos];
            switch (esc) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default: fail(line, std::string("unsupported escape \\") + esc);
            }
            ++pos;
        } else {
            out.push_back(c);
            ++pos;
        }
    }
    fail(line, "unterminated string");
}

Value parse_value(std::string_view raw, int line) {
    raw = trim(raw);
    if (raw.empty()) {
        fail(line, "missing value");
    }
    Value v;
    if (raw.front() == '"') {
        std::size_t pos = 0;
        v.kind = Value::Kind::String;
        v.text = parse_basic_string(raw, pos, line);
        if (!trim(raw.substr(pos)).empty()) {
            fail(line, "trailing characters after string");
        }
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') {
            fail(line, "unterminated array");
        }
        v.kind = Value::Kind::Array;
        std::string_view body = raw.substr(1, raw.size() - 2);
        std::size_t pos = 0;
        bool expect_item = false;
        while (pos < body.size()) {
            while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) {
                ++pos;
            }
            if (pos >= body.size()) {
                break;
            }
            if (body[pos] != '"') {
                fail(line, "arrays may only hold strings");
            }
            v.items.push_back(parse_basic_string(body, pos, line));
            expect_item = false;
            while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) {
                ++pos;
            }
            if (pos < body.size()) {
                if (body[pos] != ',') {
                    fail(line, "expected ',' in array");
                }
                ++pos;
                expect_item = true;
            }
        }
        if (expect_item) {
            fail(line, "trailing ',' in array");
        }
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::Boolean;
        v.text = raw;
        return v;
    }
    // integer or float
    bool is_float = raw.find_first_of(".eE") != std::string_view::npos &&
                    raw.find_first_not_of("+-0123456789.eE") == std::string_view::npos;
    std::int64_t ival = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), ival);
    if (!is_float && ec == std::errc() && ptr == raw.data() + raw.size()) {
        v.kind = Value::Kind::Integer;
        v.text = raw;
        return v;
    }
    try {
        std::size_t used = 0;
        std::stod(std::string(raw), &used);
        if (used == raw.size()) {
            v.kind = Value::Kind::Float;
            v.text = raw;
            return v;
        }
    } catch (const std::exception&) {
    }
    fail(line, "unrecognized value: " + std::string(raw));
}

} // namespace

std::int64_t Value::as_int() const {
    if (kind != Kind::Integer) {
        throw Error("ParseError", "value '" + text + "' is not an integer");
    }
    return std::stoll(text);
}

double Value::as_float() const {
    if (kind != Kind::Integer && kind != Kind::Float) {
        throw Error("ParseError", "value '" + text + "' is not a number");
    }
    return std::stod(text);
}

bool Value::as_bool() const {
    if (kind != Kind::Boolean) {
        throw Error("ParseError", "value '" + text + "' is not a boolean");
    }
    return text == "true";
}

bool Document::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const Value* Document::find(const std::string& section, const std::string& key) const {
    auto sec = sections.find(section);
    if (sec == sections.end()) {
        return nullptr;
    }
    auto val = sec->second.find(key);
    if (val == sec->second.end()) {
        return nullptr;
    }
    return &val->second;
}

Document parse(std::string_view text) {
    Document doc;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        // Strip comments outside strings.
        bool in_string = false;
        std::string stripped;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (c == '"' && (i == 0 || line[i - 1] != '\\')) {
                in_string = !in_string;
            }
            if (c == '#' && !in_string) {
                break;
            }
            stripped.push_back(c);
        }
        std::string_view body = trim(stripped);
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                fail(line_no, "malformed section header");
            }
            current = std::string(trim(body.substr(1, body.size() - 2)));
            doc.sections[current]; // materialize even if empty
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected key = value");
        }
        std::string key(trim(body.substr(0, eq)));
        if (key.empty()) {
            fail(line_no, "empty key");
        }
        doc.sections[current][key] = parse_value(body.substr(eq + 1), line_no);
    }
    return doc;
}

Document read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("FileNotFound", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

} // namespace cweseed::tomlmini
