// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cweseed::schema {

struct Violation {
    std::string pointer; // JSON pointer to the offending value
    std::string message;
};

/// Interpreter for the JSON-Schema subset the stage schemas use: type
/// (scalar or list), required, properties, additionalProperties (bool or
/// schema), items, enum, minimum/maximum, minLength, pattern,
/// minItems/maxItems, uniqueItems. Violations come back as data; nothing
/// throws on invalid documents.
std::vector<Violation> validate(const nlohmann::json& doc,
                                const nlohmann::json& schema);

enum class StageSchema { Candidate, Evaluation, Ranking, Outcomes, Manifest };

std::string_view schema_filename(StageSchema which);

/// Loads one of the five shipped schema documents from `dir`.
/// Errors: FileNotFound.
nlohmann::json load_schema(const std::filesystem::path& dir, StageSchema which);

/// Parse + validate; a parse failure is itself a violation at "".
std::vector<Violation> validate_stage_output(std::string_view json_text,
                                             const nlohmann::json& schema);

} // namespace cweseed::schema
