// SPDX-License-Identifier: Apache-2.0
#include "cweseed/ranker.hpp"

#include "cweseed/error.hpp"
#include "cweseed/hash.hpp"
#include "cweseed/replytext.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

namespace cweseed::ranker {

RankWeights RankWeights::equal(const std::vector<std::string>& dimensions) {
    RankWeights weights;
    for (const auto& dim : dimensions) {
        weights.entries.emplace_back(dim, 1.0);
    }
    return weights;
}

std::vector<std::pair<std::string, double>> scorecard(
    std::span<const evaluator::EvaluationReport> reports,
    const RankWeights& weights) {
    double weight_sum = 0.0;
    for (const auto& [dim, w] : weights.entries) {
        if (w < 0.0) {
            throw Error("BadWeights", "weight for '" + dim + "' is negative");
        }
        weight_sum += w;
    }
    if (weight_sum <= 0.0) {
        throw Error("BadWeights", "at least one weight must be positive");
    }
    std::set<std::string> weight_dims;
    for (const auto& [dim, w] : weights.entries) {
        weight_dims.insert(dim);
    }

    std::vector<std::pair<std::string, double>> totals;
    for (const auto& report : reports) {
        std::set<std::string> report_dims;
        std::map<std::string, int> scores;
        for (const auto& [dim, score] : report.dimension_scores) {
            report_dims.insert(dim);
            scores[dim] = score;
        }
        if (report_dims != weight_dims) {
            throw Error("DimensionMismatch",
                        "report for " + report.candidate_id +
                            " does not carry the weighted dimension set");
        }
        double total = 0.0;
        for (const auto& [dim, w] : weights.entries) {
            total += w * scores[dim];
        }
        totals.emplace_back(report.candidate_id, total / weight_sum);
    }
    return totals;
}

nlohmann::ordered_json to_json(const RankingDecision& decision) {
    nlohmann::ordered_json card = nlohmann::ordered_json::object();
    for (const auto& [id, entry] : decision.scorecard) {
        nlohmann::ordered_json per_dim = nlohmann::ordered_json::object();
        for (const auto& [dim, score] : entry.per_dimension) {
            per_dim[dim] = score;
        }
        card[id] = nlohmann::ordered_json{{"weighted_total", entry.weighted_total},
                                          {"per_dimension", std::move(per_dim)}};
    }
    return nlohmann::ordered_json{
        {"submission_id", decision.submission_id},
        {"mode", decision.mode},
        {"ordering", decision.ordering},
        {"chosen", decision.chosen},
        {"scorecard", std::move(card)},
        {"justification", decision.justification},
        {"peer_review_notes",
         decision.peer_review_notes ? nlohmann::ordered_json(*decision.peer_review_notes)
                                    : nlohmann::ordered_json(nullptr)},
        {"simulated_student_response",
         decision.simulated_student_response
             ? nlohmann::ordered_json(*decision.simulated_student_response)
             : nlohmann::ordered_json(nullptr)},
    };
}

RankingDecision decision_from_json(const nlohmann::json& doc) {
    RankingDecision decision;
    decision.submission_id = doc.at("submission_id").get<std::string>();
    decision.mode = doc.value("mode", "score");
    for (const auto& id : doc.at("ordering")) {
        decision.ordering.push_back(id.get<std::string>());
    }
    decision.chosen = doc.at("chosen").get<std::string>();
    if (doc.contains("scorecard")) {
        for (auto it = doc["scorecard"].begin(); it != doc["scorecard"].end(); ++it) {
            ScorecardEntry entry;
            entry.weighted_total = it.value().at("weighted_total").get<double>();
            if (it.value().contains("per_dimension")) {
                for (auto d = it.value()["per_dimension"].begin();
                     d != it.value()["per_dimension"].end(); ++d) {
                    entry.per_dimension.emplace_back(d.key(), d.value().get<int>());
                }
            }
            decision.scorecard.emplace_back(it.key(), std::move(entry));
        }
    }
    decision.justification = doc.value("justification", "");
    if (doc.contains("peer_review_notes") && !doc["peer_review_notes"].is_null()) {
        decision.peer_review_notes = doc["peer_review_notes"].get<std::string>();
    }
    if (doc.contains("simulated_student_response") &&
        !doc["simulated_student_response"].is_null()) {
        decision.simulated_student_response =
            doc["simulated_student_response"].get<std::string>();
    }
    return decision;
}

RankingDecision rank(provider::LlmProvider& llm,
                     const std::string& submission_id,
                     std::span<const injector::InjectionCandidate> candidates,
                     std::span<const evaluator::EvaluationReport> reports,
                     const corpus::AssignmentContext& ctx,
                     const RankOptions& options) {
    std::map<std::string, const injector::InjectionCandidate*> by_id;
    for (const auto& candidate : candidates) {
        if (candidate.status == injector::Status::Validated) {
            by_id[candidate.candidate_id] = &candidate;
        }
    }
    std::vector<const evaluator::EvaluationReport*> usable;
    for (const auto& report : reports) {
        if (by_id.count(report.candidate_id) > 0) {
            usable.push_back(&report);
        }
    }
    if (usable.empty()) {
        throw Error("NoValidCandidates",
                    "no validated candidate carries an evaluation report");
    }

    std::vector<evaluator::EvaluationReport> owned;
    owned.reserve(usable.size());
    for (const auto* r : usable) {
        owned.push_back(*r);
    }
    auto totals = scorecard(owned, options.weights);
    std::map<std::string, double> total_by_id(totals.begin(), totals.end());
    std::map<std::string, int> pedagogical;
    for (const auto& report : owned) {
        int score = 0;
        for (const auto& [dim, s] : report.dimension_scores) {
            if (dim == options.pedagogical_dimension) {
                score = s;
            }
        }
        pedagogical[report.candidate_id] = score;
    }

    RankingDecision decision;
    decision.submission_id = submission_id;
    for (const auto& [id, total] : totals) {
        decision.ordering.push_back(id);
    }
    std::sort(decision.ordering.begin(), decision.ordering.end(),
              [&](const std::string& a, const std::string& b) {
                  if (total_by_id[a] != total_by_id[b]) {
                      return total_by_id[a] > total_by_id[b];
                  }
                  if (pedagogical[a] != pedagogical[b]) {
                      return pedagogical[a] > pedagogical[b];
                  }
                  return a < b;
              });

    for (const auto& report : owned) {
        ScorecardEntry entry;
        entry.weighted_total = total_by_id[report.candidate_id];
        entry.per_dimension = report.dimension_scores;
        decision.scorecard.emplace_back(report.candidate_id, std::move(entry));
    }
    std::sort(decision.scorecard.begin(), decision.scorecard.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    decision.chosen = decision.ordering.front();

    // Provider turn: justification for the pick (and optionally a re-pick
    // among the top k in llm_override mode).
    int k = std::min<int>(options.top_k, static_cast<int>(decision.ordering.size()));
    std::string summary;
    for (int i = 0; i < (options.llm_override ? k : 1); ++i) {
        const std::string& id = decision.ordering[static_cast<std::size_t>(i)];
        const injector::InjectionCandidate* candidate = by_id[id];
        const evaluator::EvaluationReport* report = nullptr;
        for (const auto& r : owned) {
            if (r.candidate_id == id) {
                report = &r;
            }
        }
        char total_buf[32];
        std::snprintf(total_buf, sizeof total_buf, "%.3f", total_by_id[id]);
        summary += "candidate " + id + " (" + candidate->cwe.id + " " +
                   candidate->cwe.name + "), weighted total " + total_buf + "\n";
        if (report != nullptr) {
            summary += "  evaluator rationale: " + report->rationale + "\n";
        }
        summary += "  flaw description: " + candidate->rationale + "\n";
    }
    std::string mode_instructions =
        options.llm_override
            ? "Several finalists are listed. Reply with JSON: "
              "{\"chosen_candidate_id\": \"<one of the listed ids>\", "
              "\"justification\": \"...\", \"peer_review_notes\": \"...\", "
              "\"simulated_student_response\": \"...\"}"
            : "Explain why the first listed candidate is the most "
              "instructionally valuable. Reply with JSON: "
              "{\"justification\": \"...\", \"peer_review_notes\": \"...\", "
              "\"simulated_student_response\": \"...\"}";

    prompts::PromptBundle prompt = prompts::render(
        options.prompt, {
                            {"course_description", ctx.course_description},
                            {"assignment_spec", ctx.assignment_spec},
                            {"candidates", summary},
                            {"instructions", mode_instructions},
                        });
    provider::CompletionRequest request{prompt.rendered_text, 2048, 0.0, 0};
    auto started = std::chrono::steady_clock::now();
    provider::CompletionReply reply = llm.complete(request);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    if (options.trace_sink != nullptr) {
        trace::TraceEvent event;
        event.timestamp = trace::rfc3339_utc_now();
        event.stage = trace::Stage::Rank;
        event.agent = "ranker";
        event.prompt_name = prompt.prompt_name;
        event.prompt_version = prompt.prompt_version;
        event.subject = submission_id;
        event.input_hash = hash::sha256_hex(prompt.rendered_text);
        event.output_hash = hash::sha256_hex(reply.text);
        event.duration_ms = static_cast<std::uint64_t>(elapsed.count());
        options.trace_sink->push_back(std::move(event));
    }

    auto json_text = replytext::extract_json_object(reply.text);
    if (json_text) {
        try {
            nlohmann::json doc = nlohmann::json::parse(*json_text);
            decision.justification = doc.value("justification", "");
            if (doc.contains("peer_review_notes") &&
                doc["peer_review_notes"].is_string()) {
                decision.peer_review_notes = doc["peer_review_notes"].get<std::string>();
            }
            if (doc.contains("simulated_student_response") &&
                doc["simulated_student_response"].is_string()) {
                decision.simulated_student_response =
                    doc["simulated_student_response"].get<std::string>();
            }
            if (options.llm_override && doc.contains("chosen_candidate_id")) {
                std::string pick = doc["chosen_candidate_id"].get<std::string>();
                auto it = std::find(decision.ordering.begin(),
                                    decision.ordering.begin() + k, pick);
                if (it != decision.ordering.begin() + k) {
                    std::rotate(decision.ordering.begin(), it, it + 1);
                    decision.chosen = pick;
                    decision.mode = "llm_override";
                }
            }
        } catch (const nlohmann::json::exception&) {
            decision.justification = replytext::trim(reply.text);
        }
    } else {
        decision.justification = replytext::trim(reply.text);
    }
    if (decision.justification.empty()) {
        decision.justification = replytext::trim(reply.text);
    }
    return decision;
}

} // namespace cweseed::ranker
