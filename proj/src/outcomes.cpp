// SPDX-License-Identifier: Apache-2.0
#include "cweseed/outcomes.hpp"

#include "cweseed/error.hpp"
#include "cweseed/hash.hpp"
#include "cweseed/replytext.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <set>
#include <sstream>

namespace cweseed::outcomes {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::size_t word_count(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::size_t count = 0;
    while (in >> word) {
        ++count;
    }
    return count;
}

// Throws Error("MalformedArtifact") when the reply violates the artifact
// invariants.
LearningArtifact parse_artifact(const std::string& text) {
    auto json_text = replytext::extract_json_object(text);
    if (!json_text) {
        throw Error("MalformedArtifact", "no JSON object in the reply");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(*json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("MalformedArtifact", std::string("unparseable JSON: ") + e.what());
    }
    LearningArtifact artifact;
    if (!doc.contains("explanation") || !doc["explanation"].is_string()) {
        throw Error("MalformedArtifact", "missing explanation");
    }
    artifact.explanation = doc["explanation"].get<std::string>();
    if (word_count(artifact.explanation) > 200) {
        throw Error("MalformedArtifact", "explanation exceeds 200 words");
    }
    if (!doc.contains("mcq") || !doc["mcq"].is_object()) {
        throw Error("MalformedArtifact", "missing mcq");
    }
    const auto& mcq = doc["mcq"];
    if (!mcq.contains("stem") || !mcq["stem"].is_string()) {
        throw Error("MalformedArtifact", "mcq lacks a stem");
    }
    artifact.mcq.stem = mcq["stem"].get<std::string>();
    if (!mcq.contains("options") || !mcq["options"].is_array() ||
        mcq["options"].size() != 4) {
        throw Error("MalformedArtifact", "mcq must offer exactly 4 options");
    }
    std::set<std::string> seen;
    for (const auto& option : mcq["options"]) {
        if (!option.is_string()) {
            throw Error("MalformedArtifact", "mcq options must be strings");
        }
        std::string text_opt = option.get<std::string>();
        if (!seen.insert(text_opt).second) {
            throw Error("MalformedArtifact", "mcq options must be pairwise distinct");
        }
        artifact.mcq.options.push_back(std::move(text_opt));
    }
    if (!mcq.contains("correct_index") || !mcq["correct_index"].is_number_integer()) {
        throw Error("MalformedArtifact", "mcq lacks correct_index");
    }
    artifact.mcq.correct_index = mcq["correct_index"].get<int>();
    if (artifact.mcq.correct_index < 0 || artifact.mcq.correct_index > 3) {
        throw Error("MalformedArtifact", "correct_index must lie in 0..3");
    }
    if (!mcq.contains("distractor_rationales") ||
        !mcq["distractor_rationales"].is_array() ||
        mcq["distractor_rationales"].size() != 3) {
        throw Error("MalformedArtifact", "mcq needs exactly 3 distractor rationales");
    }
    for (const auto& r : mcq["distractor_rationales"]) {
        if (!r.is_string()) {
            throw Error("MalformedArtifact", "distractor rationales must be strings");
        }
        artifact.mcq.distractor_rationales.push_back(r.get<std::string>());
    }
    if (!doc.contains("reflection_prompt") || !doc["reflection_prompt"].is_string()) {
        throw Error("MalformedArtifact", "missing reflection_prompt");
    }
    artifact.reflection_prompt = doc["reflection_prompt"].get<std::string>();
    if (!doc.contains("bloom_tags") || !doc["bloom_tags"].is_object()) {
        throw Error("MalformedArtifact", "missing bloom_tags");
    }
    for (const char* item : {"explanation", "mcq", "reflection"}) {
        if (!doc["bloom_tags"].contains(item)) {
            throw Error("MalformedArtifact",
                        std::string("bloom_tags lacks an entry for ") + item);
        }
        BloomLevel level;
        try {
            level = validate_bloom(doc["bloom_tags"][item].get<std::string>());
        } catch (const Error&) {
            throw Error("MalformedArtifact",
                        std::string("bloom tag for ") + item + " is not a level");
        }
        artifact.bloom_tags.emplace_back(item, level);
    }
    return artifact;
}

} // namespace

std::string_view to_string(BloomLevel level) {
    switch (level) {
    case BloomLevel::Remember: return "Remember";
    case BloomLevel::Understand: return "Understand";
    case BloomLevel::Apply: return "Apply";
    case BloomLevel::Analyze: return "Analyze";
    case BloomLevel::Evaluate: return "Evaluate";
    case BloomLevel::Create: return "Create";
    }
    return "Remember";
}

BloomLevel validate_bloom(std::string_view tag) {
    std::string t = lower(tag);
    if (t == "remember") return BloomLevel::Remember;
    if (t == "understand") return BloomLevel::Understand;
    if (t == "apply") return BloomLevel::Apply;
    if (t == "analyze") return BloomLevel::Analyze;
    if (t == "evaluate") return BloomLevel::Evaluate;
    if (t == "create") return BloomLevel::Create;
    throw Error("UnknownLevel", "'" + std::string(tag) + "' is not a Bloom level");
}

nlohmann::ordered_json to_json(const LearningArtifact& artifact) {
    nlohmann::ordered_json tags = nlohmann::ordered_json::object();
    for (const auto& [item, level] : artifact.bloom_tags) {
        tags[item] = std::string(to_string(level));
    }
    return nlohmann::ordered_json{
        {"submission_id", artifact.submission_id},
        {"candidate_id", artifact.candidate_id},
        {"explanation", artifact.explanation},
        {"mcq",
         nlohmann::ordered_json{
             {"stem", artifact.mcq.stem},
             {"options", artifact.mcq.options},
             {"correct_index", artifact.mcq.correct_index},
             {"distractor_rationales", artifact.mcq.distractor_rationales},
         }},
        {"reflection_prompt", artifact.reflection_prompt},
        {"bloom_tags", std::move(tags)},
    };
}

LearningArtifact artifact_from_json(const nlohmann::json& doc) {
    LearningArtifact artifact;
    artifact.submission_id = doc.value("submission_id", "");
    artifact.candidate_id = doc.value("candidate_id", "");
    artifact.explanation = doc.at("explanation").get<std::string>();
    const auto& mcq = doc.at("mcq");
    artifact.mcq.stem = mcq.at("stem").get<std::string>();
    for (const auto& option : mcq.at("options")) {
        artifact.mcq.options.push_back(option.get<std::string>());
    }
    artifact.mcq.correct_index = mcq.at("correct_index").get<int>();
    for (const auto& r : mcq.at("distractor_rationales")) {
        artifact.mcq.distractor_rationales.push_back(r.get<std::string>());
    }
    artifact.reflection_prompt = doc.at("reflection_prompt").get<std::string>();
    for (auto it = doc.at("bloom_tags").begin(); it != doc.at("bloom_tags").end();
         ++it) {
        artifact.bloom_tags.emplace_back(it.key(),
                                         validate_bloom(it.value().get<std::string>()));
    }
    return artifact;
}

prompts::PromptBundle build_outcomes_prompt(
    const ranker::RankingDecision& decision,
    const injector::InjectionCandidate& candidate,
    const evaluator::EvaluationReport* evaluation,
    const corpus::AssignmentContext& ctx, const prompts::PromptRecord& record) {
    std::string misconceptions;
    if (evaluation != nullptr) {
        for (const auto& m : evaluation->misconceptions) {
            misconceptions += "- " + m.statement + "\n";
        }
    }
    if (misconceptions.empty()) {
        misconceptions = "(none reported; invent plausible ones)\n";
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
                    {"injected_code", candidate.injected_code},
                    {"justification", decision.justification},
                    {"misconceptions", misconceptions},
                });
}

LearningArtifact generate_outcomes(provider::LlmProvider& llm,
                                   const ranker::RankingDecision& decision,
                                   const injector::InjectionCandidate& candidate,
                                   const evaluator::EvaluationReport* evaluation,
                                   const corpus::AssignmentContext& ctx,
                                   const OutcomesOptions& options) {
    if (candidate.candidate_id != decision.chosen) {
        throw Error("BadCandidate", "candidate " + candidate.candidate_id +
                                        " is not the decision's chosen " +
                                        decision.chosen);
    }
    prompts::PromptBundle base =
        build_outcomes_prompt(decision, candidate, evaluation, ctx, options.prompt);

    std::string last_error;
    for (int turn = 0; turn < 2; ++turn) {
        prompts::PromptBundle prompt = base;
        if (turn == 1) {
            prompts::PromptBundle repair =
                prompts::render(options.repair_prompt, {{"error", last_error}});
            prompt.rendered_text += "\n\n" + repair.rendered_text;
            prompt.prompt_name += "+" + options.repair_prompt.name;
        }
        provider::CompletionRequest request{prompt.rendered_text, 2048, 0.0, 0};
        auto started = std::chrono::steady_clock::now();
        provider::CompletionReply reply;
        try {
            reply = llm.complete(request);
        } catch (const Error& e) {
            throw Error("ProviderFailed", e.what());
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        if (options.trace_sink != nullptr) {
            trace::TraceEvent event;
            event.timestamp = trace::rfc3339_utc_now();
            event.stage = trace::Stage::Outcomes;
            event.agent = "outcome_generator";
            event.prompt_name = prompt.prompt_name;
            event.prompt_version = prompt.prompt_version;
            event.subject = decision.submission_id;
            event.input_hash = hash::sha256_hex(prompt.rendered_text);
            event.output_hash = hash::sha256_hex(reply.text);
            event.duration_ms = static_cast<std::uint64_t>(elapsed.count());
            options.trace_sink->push_back(std::move(event));
        }
        try {
            LearningArtifact artifact = parse_artifact(reply.text);
            artifact.submission_id = decision.submission_id;
            artifact.candidate_id = candidate.candidate_id;
            return artifact;
        } catch (const Error& e) {
            last_error = e.what();
            if (turn == 1) {
                throw;
            }
        }
    }
    throw Error("MalformedArtifact", last_error); // unreachable
}

} // namespace cweseed::outcomes
