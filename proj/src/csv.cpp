// SPDX-License-Identifier: Apache-2.0
#include "cweseed/csv.hpp"

#include "cweseed/error.hpp"

#include <fstream>
#include <sstream>

namespace cweseed::csv {

namespace {

bool needs_quoting(std::string_view field) {
    return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

} // namespace

Table parse(std::string_view text) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool record_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty() && table.rows.empty()) {
            table.header = std::move(record);
        } else {
            table.rows.push_back(std::move(record));
        }
        record.clear();
        record_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_started) {
                in_quotes = true;
                field_started = true;
                record_started = true;
            } else {
                field.push_back(c); // stray quote mid-field, keep verbatim
            }
            break;
        case ',':
            end_field();
            record_started = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') {
                ++i;
            }
            end_record();
            break;
        case '\n':
            end_record();
            break;
        default:
            field.push_back(c);
            field_started = true;
            record_started = true;
            break;
        }
    }
    if (in_quotes) {
        throw Error("MalformedCsv", "unterminated quoted field at end of input");
    }
    if (record_started || field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("FileNotFound", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string write(const Table& table) {
    std::string out;
    auto emit_record = [&](const std::vector<std::string>& record) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i != 0) {
                out.push_back(',');
            }
            if (needs_quoting(record[i])) {
                out.push_back('"');
                for (char c : record[i]) {
                    if (c == '"') {
                        out.push_back('"');
                    }
                    out.push_back(c);
                }
                out.push_back('"');
            } else {
                out.append(record[i]);
            }
        }
        out.push_back('\n');
    };
    emit_record(table.header);
    for (const auto& row : table.rows) {
        emit_record(row);
    }
    return out;
}

} // namespace cweseed::csv
