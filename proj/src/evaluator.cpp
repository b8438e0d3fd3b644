// SPDX-License-Identifier: Apache-2.0
#include "cweseed/evaluator.hpp"

#include "cweseed/error.hpp"
#include "cweseed/gestalt.hpp"
#include "cweseed/hash.hpp"
#include "cweseed/replytext.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

namespace cweseed::evaluator {

namespace {

std::string format_metric(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

// Parses the provider's JSON reply. Throws Error("MalformedReply") for shape
// problems and Error("ScoreOutOfRange") for scores outside [1,10].
void parse_reply(const std::string& text,
                 const std::vector<std::string>& dimensions,
                 EvaluationReport& report) {
    auto json_text = replytext::extract_json_object(text);
    if (!json_text) {
        throw Error("MalformedReply", "no JSON object in the reply");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(*json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedReply", std::string("unparseable JSON: ") + e.what());
    }
    std::vector<std::pair<std::string, int>> scores;
    for (const auto& dim : dimensions) {
        if (!doc.contains(dim)) {
            throw Error("MalformedReply", "missing score for dimension '" + dim + "'");
        }
        const auto& value = doc[dim];
        long score;
        if (value.is_number_integer()) {
            score = value.get<long>();
        } else if (value.is_number_float() &&
                   std::floor(value.get<double>()) == value.get<double>()) {
            score = static_cast<long>(value.get<double>());
        } else {
            throw Error("MalformedReply",
                        "score for '" + dim + "' is not an integer");
        }
        if (score < 1 || score > 10) {
            throw Error("ScoreOutOfRange", "dimension '" + dim + "' scored " +
                                               std::to_string(score) +
                                               ", outside [1,10]");
        }
        scores.emplace_back(dim, static_cast<int>(score));
    }
    if (!doc.contains("rationale") || !doc["rationale"].is_string()) {
        throw Error("MalformedReply", "missing rationale");
    }
    std::vector<Misconception> misconceptions;
    if (doc.contains("misconceptions")) {
        if (!doc["misconceptions"].is_array()) {
            throw Error("MalformedReply", "misconceptions must be an array");
        }
        for (const auto& m : doc["misconceptions"]) {
            Misconception item;
            if (m.is_string()) {
                item.statement = m.get<std::string>();
            } else if (m.is_object() && m.contains("statement")) {
                item.statement = m["statement"].get<std::string>();
                item.productive = m.value("productive", true);
            } else {
                throw Error("MalformedReply", "misconception entries need a statement");
            }
            misconceptions.push_back(std::move(item));
        }
    }
    report.dimension_scores = std::move(scores);
    report.rationale = doc["rationale"].get<std::string>();
    report.misconceptions = std::move(misconceptions);
}

} // namespace

const std::vector<std::string>& default_dimensions() {
    static const std::vector<std::string> dims{
        "relevance", "appropriateness", "naturalness", "pedagogical_value"};
    return dims;
}

nlohmann::ordered_json to_json(const EvaluationReport& report) {
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (const auto& [dim, score] : report.dimension_scores) {
        scores[dim] = score;
    }
    nlohmann::ordered_json misconceptions = nlohmann::ordered_json::array();
    for (const auto& m : report.misconceptions) {
        misconceptions.push_back(nlohmann::ordered_json{
            {"statement", m.statement}, {"productive", m.productive}});
    }
    return nlohmann::ordered_json{
        {"candidate_id", report.candidate_id},
        {"similarity", report.similarity},
        {"semantic_drift", report.semantic_drift},
        {"dimension_scores", std::move(scores)},
        {"rationale", report.rationale},
        {"misconceptions", std::move(misconceptions)},
    };
}

EvaluationReport report_from_json(const nlohmann::json& doc) {
    EvaluationReport report;
    report.candidate_id = doc.at("candidate_id").get<std::string>();
    report.similarity = doc.at("similarity").get<double>();
    report.semantic_drift = doc.at("semantic_drift").get<double>();
    for (auto it = doc.at("dimension_scores").begin();
         it != doc.at("dimension_scores").end(); ++it) {
        report.dimension_scores.emplace_back(it.key(), it.value().get<int>());
    }
    report.rationale = doc.value("rationale", "");
    for (const auto& m : doc.value("misconceptions", nlohmann::json::array())) {
        report.misconceptions.push_back(
            {m.at("statement").get<std::string>(), m.value("productive", true)});
    }
    return report;
}

prompts::PromptBundle build_evaluation_prompt(
    const injector::InjectionCandidate& candidate,
    const corpus::AssignmentContext& ctx, double similarity, double drift,
    const std::vector<std::string>& dimensions,
    const prompts::PromptRecord& record) {
    std::string dim_list;
    std::string dim_keys;
    for (const auto& dim : dimensions) {
        dim_list += "- " + dim + "\n";
        if (!dim_keys.empty()) {
            dim_keys += ", ";
        }
        dim_keys += "\"" + dim + "\": <integer 1-10>";
    }
    return prompts::render(
        record, {
                    {"course_description", ctx.course_description},
                    {"assignment_spec", ctx.assignment_spec},
                    {"cwe_id", candidate.cwe.id},
                    {"cwe_name", candidate.cwe.name},
                    {"cwe_description", candidate.cwe.description},
                    {"file_path", candidate.file_path},
                    {"language", std::string(corpus::to_string(candidate.language))},
                    {"original_code", candidate.original_code},
                    {"injected_code", candidate.injected_code},
                    {"similarity", format_metric(similarity)},
                    {"semantic_drift", format_metric(drift)},
                    {"dimensions", dim_list},
                    {"dimension_keys", dim_keys},
                });
}

EvaluationReport evaluate(provider::LlmProvider& llm,
                          const injector::InjectionCandidate& candidate,
                          const corpus::AssignmentContext& ctx,
                          const EvaluateOptions& options) {
    if (candidate.status != injector::Status::Validated) {
        throw Error("BadCandidate", candidate.candidate_id + " is not validated");
    }
    EvaluationReport report;
    report.candidate_id = candidate.candidate_id;
    report.similarity =
        metrics::similarity(candidate.original_code, candidate.injected_code);
    static const metrics::TokenFrequencyEmbedder default_embedder;
    const metrics::EmbeddingProvider& embedder =
        options.embedder != nullptr ? *options.embedder : default_embedder;
    report.semantic_drift = metrics::semantic_drift(
        candidate.original_code, candidate.injected_code, embedder);

    prompts::PromptBundle base = build_evaluation_prompt(
        candidate, ctx, report.similarity, report.semantic_drift,
        options.dimensions, options.prompt);

    std::string last_error;
    for (int turn = 0; turn < 2; ++turn) {
        prompts::PromptBundle prompt = base;
        if (turn == 1) {
            prompts::PromptBundle repair = prompts::render(
                options.repair_prompt, {{"error", last_error}});
            prompt.rendered_text += "\n\n" + repair.rendered_text;
            prompt.prompt_name += "+" + options.repair_prompt.name;
        }
        provider::CompletionRequest request{prompt.rendered_text, 2048, 0.0, 0};
        auto started = std::chrono::steady_clock::now();
        provider::CompletionReply reply = llm.complete(request);
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        if (options.trace_sink != nullptr) {
            trace::TraceEvent event;
            event.timestamp = trace::rfc3339_utc_now();
            event.stage = trace::Stage::Evaluate;
            event.agent = "evaluator";
            event.prompt_name = prompt.prompt_name;
            event.prompt_version = prompt.prompt_version;
            event.subject = candidate.candidate_id;
            event.input_hash = hash::sha256_hex(prompt.rendered_text);
            event.output_hash = hash::sha256_hex(reply.text);
            event.duration_ms = static_cast<std::uint64_t>(elapsed.count());
            options.trace_sink->push_back(std::move(event));
        }
        try {
            parse_reply(reply.text, options.dimensions, report);
            return report;
        } catch (const Error& e) {
            last_error = e.what();
            if (turn == 1) {
                throw;
            }
        }
    }
    throw Error("MalformedReply", last_error); // unreachable
}

} // namespace cweseed::evaluator
