// SPDX-License-Identifier: Apache-2.0
#include "cweseed/schema.hpp"

#include "cweseed/error.hpp"

#include <fstream>
#include <regex>
#include <set>

namespace cweseed::schema {

namespace {

std::string escape_pointer_token(const std::string& token) {
    std::string out;
    for (char c : token) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "array") return value.is_array();
    if (type == "object") return value.is_object();
    if (type == "null") return value.is_null();
    return false;
}

void check(const nlohmann::json& value, const nlohmann::json& schema,
           const std::string& pointer, std::vector<Violation>& out) {
    if (!schema.is_object()) {
        return;
    }
    if (schema.contains("type")) {
        const auto& type = schema["type"];
        bool ok = false;
        if (type.is_string()) {
            ok = type_matches(value, type.get<std::string>());
        } else if (type.is_array()) {
            for (const auto& t : type) {
                ok = ok || type_matches(value, t.get<std::string>());
            }
        }
        if (!ok) {
            out.push_back({pointer, "expected type " + type.dump() + ", got " +
                                        std::string(value.type_name())});
            return; // further keyword checks would only cascade
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& allowed : schema["enum"]) {
            ok = ok || allowed == value;
        }
        if (!ok) {
            out.push_back({pointer, "value " + value.dump() + " not in enum " +
                                        schema["enum"].dump()});
            return;
        }
    }
    if (value.is_number()) {
        if (schema.contains("minimum") &&
            value.get<double>() < schema["minimum"].get<double>()) {
            out.push_back({pointer, "value " + value.dump() + " below minimum " +
                                        schema["minimum"].dump()});
        }
        if (schema.contains("maximum") &&
            value.get<double>() > schema["maximum"].get<double>()) {
            out.push_back({pointer, "value " + value.dump() + " above maximum " +
                                        schema["maximum"].dump()});
        }
    }
    if (value.is_string()) {
        if (schema.contains("minLength") &&
            value.get<std::string>().size() < schema["minLength"].get<std::size_t>()) {
            out.push_back({pointer, "string shorter than minLength " +
                                        schema["minLength"].dump()});
        }
        if (schema.contains("pattern")) {
            std::regex re(schema["pattern"].get<std::string>());
            if (!std::regex_search(value.get<std::string>(), re)) {
                out.push_back({pointer, "string does not match pattern " +
                                            schema["pattern"].dump()});
            }
        }
    }
    if (value.is_array()) {
        if (schema.contains("minItems") &&
            value.size() < schema["minItems"].get<std::size_t>()) {
            out.push_back({pointer, "array shorter than minItems " +
                                        schema["minItems"].dump()});
        }
        if (schema.contains("maxItems") &&
            value.size() > schema["maxItems"].get<std::size_t>()) {
            out.push_back({pointer, "array longer than maxItems " +
                                        schema["maxItems"].dump()});
        }
        if (schema.value("uniqueItems", false)) {
            std::set<std::string> seen;
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (!seen.insert(value[i].dump()).second) {
                    out.push_back({pointer + "/" + std::to_string(i),
                                   "duplicate array item"});
                }
            }
        }
        if (schema.contains("items")) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                check(value[i], schema["items"], pointer + "/" + std::to_string(i),
                      out);
            }
        }
    }
    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                std::string name = key.get<std::string>();
                if (!value.contains(name)) {
                    out.push_back({pointer + "/" + escape_pointer_token(name),
                                   "missing required property"});
                }
            }
        }
        const nlohmann::json* properties =
            schema.contains("properties") ? &schema["properties"] : nullptr;
        for (auto it = value.begin(); it != value.end(); ++it) {
            std::string child = pointer + "/" + escape_pointer_token(it.key());
            if (properties != nullptr && properties->contains(it.key())) {
                check(it.value(), (*properties)[it.key()], child, out);
            } else if (schema.contains("additionalProperties")) {
                const auto& extra = schema["additionalProperties"];
                if (extra.is_boolean() && !extra.get<bool>()) {
                    out.push_back({child, "unexpected property"});
                } else if (extra.is_object()) {
                    check(it.value(), extra, child, out);
                }
            }
        }
    }
}

} // namespace

std::vector<Violation> validate(const nlohmann::json& doc,
                                const nlohmann::json& schema) {
    std::vector<Violation> out;
    check(doc, schema, "", out);
    return out;
}

std::string_view schema_filename(StageSchema which) {
    switch (which) {
    case StageSchema::Candidate: return "candidate.schema.json";
    case StageSchema::Evaluation: return "evaluation.schema.json";
    case StageSchema::Ranking: return "ranking.schema.json";
    case StageSchema::Outcomes: return "outcomes.schema.json";
    case StageSchema::Manifest: return "manifest.schema.json";
    }
    return "candidate.schema.json";
}

nlohmann::json load_schema(const std::filesystem::path& dir, StageSchema which) {
    auto path = dir / schema_filename(which);
    std::ifstream in(path);
    if (!in) {
        throw Error("FileNotFound", "cannot open schema " + path.string());
    }
    return nlohmann::json::parse(in);
}

std::vector<Violation> validate_stage_output(std::string_view json_text,
                                             const nlohmann::json& schema) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        return {{"", std::string("invalid JSON: ") + e.what()}};
    }
    return validate(doc, schema);
}

} // namespace cweseed::schema
