// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 style: comma separated, fields may be double-quoted, quoted
/// fields may contain commas, newlines and doubled quotes. Accepts both
/// LF and CRLF line endings. The first record is the header.
/// Throws Error("MalformedCsv") on an unterminated quoted field.
Table parse(std::string_view text);

Table read_file(const std::filesystem::path& path);

/// Serialize with minimal quoting (only fields containing , " or newline).
std::string write(const Table& table);

} // namespace cweseed::csv
