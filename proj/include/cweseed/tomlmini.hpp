// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::tomlmini {

/// A value in the supported TOML subset. Strings keep their parsed content;
/// numbers/booleans keep the raw text and are converted on access.
struct Value {
    enum class Kind { String, Integer, Float, Boolean, Array };
    Kind kind = Kind::String;
    std::string text;                // scalar payload
    std::vector<std::string> items;  // array-of-strings payload

    std::int64_t as_int() const;
    double as_float() const;
    bool as_bool() const;
};

/// Parsed document: section -> key -> value. Keys outside any [section]
/// land in the "" section.
///
/// Supported subset: [section] headers, key = value with basic "..." strings,
/// integers, floats, booleans, arrays of basic strings, and # comments.
/// Dotted keys, nested tables, dates and multi-line strings are not.
struct Document {
    std::map<std::string, std::map<std::string, Value>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const Value* find(const std::string& section, const std::string& key) const;
};

/// Throws Error("ParseError") with a line number on anything outside the subset.
Document parse(std::string_view text);

Document read_file(const std::filesystem::path& path);

} // namespace cweseed::tomlmini
