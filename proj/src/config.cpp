// SPDX-License-Identifier: Apache-2.0
#include "cweseed/config.hpp"

#include "cweseed/error.hpp"
#include "cweseed/tomlmini.hpp"

#include <charconv>

namespace cweseed::config {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error("ParseError", key + ": '" + value + "' is not an unsigned integer");
    }
    return out;
}

int parse_int(const std::string& value, const std::string& key) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error("ParseError", key + ": '" + value + "' is not an integer");
    }
    return out;
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double out = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return out;
    } catch (const std::exception&) {
        throw Error("ParseError", key + ": '" + value + "' is not a number");
    }
}

void set_weight(ranker::RankWeights& weights, const std::string& dim, double value) {
    for (auto& [name, w] : weights.entries) {
        if (name == dim) {
            w = value;
            return;
        }
    }
    weights.entries.emplace_back(dim, value);
}

} // namespace

void apply_override(PipelineConfig& config, const std::string& key,
                    const std::string& value) {
    if (key == "submission_root") config.submission_root = value;
    else if (key == "context") config.context_path = value;
    else if (key == "cwe_csv") config.cwe_csv_path = value;
    else if (key == "heuristics") config.heuristics_path = value;
    else if (key == "smoke_suite") config.smoke_suite_path = value;
    else if (key == "prompt_dir") config.prompt_dir = value;
    else if (key == "schema_dir") config.schema_dir = value;
    else if (key == "output_dir" || key == "out") config.output_dir = value;
    else if (key == "run_id") config.run_id = value;
    else if (key == "seed") config.seed = parse_u64(value, key);
    else if (key == "max_attempts") config.max_attempts = parse_int(value, key);
    else if (key == "jobs") config.jobs = parse_int(value, key);
    else if (key == "llm_override") config.llm_override = value == "true" || value == "1";
    else if (key == "target_file_count") config.target_file_count = parse_int(value, key);
    else if (key == "target_cwe_count") config.target_cwe_count = parse_int(value, key);
    else if (key == "submission_id") config.submission_id = value;
    else if (key == "provider.kind") config.provider.kind = value;
    else if (key == "provider" ) config.provider.kind = value;
    else if (key == "provider.endpoint") config.provider.endpoint = value;
    else if (key == "provider.model") config.provider.model = value;
    else if (key == "provider.replay_dir") config.provider.replay_dir = value;
    else if (key == "provider.script_dir") config.provider.script_dir = value;
    else if (key == "provider.record_dir") config.provider.record_dir = value;
    else if (key == "provider.api_key_env") config.provider.api_key_env = value;
    else if (key.rfind("weights.", 0) == 0) {
        set_weight(config.weights, key.substr(8), parse_double(value, key));
    } else if (key == "dimensions") {
        config.dimensions.clear();
        std::size_t start = 0;
        while (start <= value.size()) {
            std::size_t comma = value.find(',', start);
            std::string dim = value.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!dim.empty()) {
                config.dimensions.push_back(dim);
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        throw Error("UnknownOverride", "no config field named '" + key + "'");
    }
}

PipelineConfig resolve_config(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    tomlmini::Document doc = tomlmini::read_file(path);
    std::filesystem::path base = path.parent_path();

    PipelineConfig config;
    auto str = [&](const char* section, const char* key) -> const std::string* {
        const tomlmini::Value* v = doc.find(section, key);
        return v == nullptr ? nullptr : &v->text;
    };

    if (const auto* v = str("", "submission_root")) config.submission_root = resolve(base, *v);
    if (const auto* v = str("", "context")) config.context_path = resolve(base, *v);
    if (const auto* v = str("", "cwe_csv")) config.cwe_csv_path = resolve(base, *v);
    if (const auto* v = str("", "heuristics")) config.heuristics_path = resolve(base, *v);
    if (const auto* v = str("", "smoke_suite")) config.smoke_suite_path = resolve(base, *v);
    if (const auto* v = str("", "prompt_dir")) config.prompt_dir = resolve(base, *v);
    if (const auto* v = str("", "schema_dir")) config.schema_dir = resolve(base, *v);
    if (const auto* v = str("", "output_dir")) config.output_dir = resolve(base, *v);
    if (const auto* v = str("", "run_id")) config.run_id = *v;
    if (const auto* v = str("", "submission_id")) config.submission_id = *v;
    if (const auto* v = doc.find("", "seed")) config.seed = static_cast<std::uint64_t>(v->as_int());
    if (const auto* v = doc.find("", "max_attempts")) config.max_attempts = static_cast<int>(v->as_int());
    if (const auto* v = doc.find("", "jobs")) config.jobs = static_cast<int>(v->as_int());
    if (const auto* v = doc.find("", "llm_override")) config.llm_override = v->as_bool();
    if (const auto* v = doc.find("", "target_file_count")) config.target_file_count = static_cast<int>(v->as_int());
    if (const auto* v = doc.find("", "target_cwe_count")) config.target_cwe_count = static_cast<int>(v->as_int());
    if (const auto* v = doc.find("", "dimensions")) config.dimensions = v->items;

    if (const auto* v = str("provider", "kind")) config.provider.kind = *v;
    if (const auto* v = str("provider", "endpoint")) config.provider.endpoint = *v;
    if (const auto* v = str("provider", "model")) config.provider.model = *v;
    if (const auto* v = str("provider", "replay_dir")) config.provider.replay_dir = resolve(base, *v);
    if (const auto* v = str("provider", "script_dir")) config.provider.script_dir = resolve(base, *v);
    if (const auto* v = str("provider", "record_dir")) config.provider.record_dir = resolve(base, *v);
    if (const auto* v = str("provider", "api_key_env")) config.provider.api_key_env = *v;

    auto weights_section = doc.sections.find("weights");
    if (weights_section != doc.sections.end()) {
        for (const auto& [dim, value] : weights_section->second) {
            set_weight(config.weights, dim, value.as_float());
        }
    }

    for (const auto& [key, value] : overrides) {
        apply_override(config, key, value);
    }

    if (config.max_attempts < 1) {
        throw Error("ParseError", "max_attempts must be >= 1");
    }
    if (config.jobs < 1) {
        throw Error("ParseError", "jobs must be >= 1");
    }
    return config;
}

} // namespace cweseed::config
