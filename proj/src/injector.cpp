// SPDX-License-Identifier: Apache-2.0
#include "cweseed/injector.hpp"

#include "cweseed/error.hpp"
#include "cweseed/hash.hpp"
#include "cweseed/replytext.hpp"
#include "cweseed/syntax.hpp"

#include <chrono>

namespace cweseed::injector {

namespace {

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

nlohmann::ordered_json cwe_to_json(const corpus::CweEntry& cwe) {
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
    for (const auto& [key, value] : cwe.metadata) {
        metadata[key] = value;
    }
    return nlohmann::ordered_json{
        {"id", cwe.id},
        {"name", cwe.name},
        {"description", cwe.description},
        {"metadata", std::move(metadata)},
    };
}

corpus::CweEntry cwe_from_json(const nlohmann::json& doc) {
    corpus::CweEntry cwe;
    cwe.id = doc.at("id").get<std::string>();
    cwe.name = doc.at("name").get<std::string>();
    cwe.description = doc.value("description", "");
    if (doc.contains("metadata")) {
        for (auto it = doc["metadata"].begin(); it != doc["metadata"].end(); ++it) {
            cwe.metadata.emplace_back(it.key(), it.value().get<std::string>());
        }
    }
    return cwe;
}

} // namespace

std::string_view to_string(Status status) {
    switch (status) {
    case Status::Validated: return "validated";
    case Status::SyntaxFailed: return "syntax_failed";
    case Status::BehaviorDiverged: return "behavior_diverged";
    case Status::ProviderFailed: return "provider_failed";
    }
    return "provider_failed";
}

Status status_from_string(std::string_view name) {
    if (name == "validated") return Status::Validated;
    if (name == "syntax_failed") return Status::SyntaxFailed;
    if (name == "behavior_diverged") return Status::BehaviorDiverged;
    return Status::ProviderFailed;
}

nlohmann::ordered_json to_json(const InjectionCandidate& candidate) {
    nlohmann::ordered_json regions = nlohmann::ordered_json::array();
    for (const auto& r : candidate.changed_regions) {
        regions.push_back(nlohmann::ordered_json{{"first", r.first}, {"last", r.last}});
    }
    return nlohmann::ordered_json{
        {"candidate_id", candidate.candidate_id},
        {"cwe", cwe_to_json(candidate.cwe)},
        {"file_path", candidate.file_path},
        {"language", std::string(corpus::to_string(candidate.language))},
        {"original_code", candidate.original_code},
        {"injected_code", candidate.injected_code},
        {"changed_regions", std::move(regions)},
        {"rationale", candidate.rationale},
        {"status", std::string(to_string(candidate.status))},
        {"failure_reason", candidate.failure_reason},
        {"behavioral_verdict", std::string(runner::to_string(candidate.behavioral_verdict))},
        {"attempts", candidate.attempts},
        {"html", candidate.html.has_value() ? nlohmann::ordered_json(*candidate.html)
                                            : nlohmann::ordered_json(nullptr)},
    };
}

InjectionCandidate candidate_from_json(const nlohmann::json& doc) {
    InjectionCandidate candidate;
    candidate.candidate_id = doc.at("candidate_id").get<std::string>();
    candidate.cwe = cwe_from_json(doc.at("cwe"));
    candidate.file_path = doc.at("file_path").get<std::string>();
    if (auto lang = corpus::language_from_name(doc.value("language", "python"))) {
        candidate.language = *lang;
    }
    candidate.original_code = doc.at("original_code").get<std::string>();
    candidate.injected_code = doc.at("injected_code").get<std::string>();
    for (const auto& r : doc.value("changed_regions", nlohmann::json::array())) {
        candidate.changed_regions.push_back(
            {r.at("first").get<int>(), r.at("last").get<int>()});
    }
    candidate.rationale = doc.value("rationale", "");
    candidate.status = status_from_string(doc.value("status", "provider_failed"));
    candidate.failure_reason = doc.value("failure_reason", "");
    std::string verdict = doc.value("behavioral_verdict", "syntax_only");
    candidate.behavioral_verdict = verdict == "equivalent"
                                       ? runner::Verdict::Equivalent
                                       : (verdict == "diverged"
                                              ? runner::Verdict::Diverged
                                              : runner::Verdict::SyntaxOnly);
    candidate.attempts = doc.value("attempts", 0);
    if (doc.contains("html") && !doc["html"].is_null()) {
        candidate.html = doc["html"].get<std::string>();
    }
    return candidate;
}

std::string make_candidate_id(const std::string& file_path,
                              const std::string& cwe_id, int attempt) {
    return file_stem(file_path) + "__" + cwe_id + "__" + std::to_string(attempt);
}

prompts::PromptBundle build_injection_prompt(
    const corpus::AssignmentContext& ctx, const corpus::SubmissionFile& file,
    const corpus::CweEntry& cwe, const std::vector<points::InjectionPoint>& pts,
    const prompts::PromptRecord& record) {
    std::string point_text = pts.empty()
                                 ? "(none discovered; place the flaw wherever it "
                                   "fits the code most naturally)"
                                 : points::describe_points(pts);
    return prompts::render(record,
                           {
                               {"course_description", ctx.course_description},
                               {"assignment_spec", ctx.assignment_spec},
                               {"cwe_id", cwe.id},
                               {"cwe_name", cwe.name},
                               {"cwe_description", cwe.description},
                               {"file_path", file.path},
                               {"language", std::string(corpus::to_string(file.language))},
                               {"code", file.content},
                               {"points", point_text},
                           });
}

prompts::PromptBundle build_repair_prompt(const prompts::PromptBundle& base,
                                          const prompts::PromptRecord& repair_record,
                                          const std::string& reason,
                                          const std::string& diagnostics) {
    prompts::PromptBundle repair = prompts::render(
        repair_record, {{"reason", reason}, {"diagnostics", diagnostics}});
    prompts::PromptBundle combined = base;
    combined.rendered_text += "\n\n";
    combined.rendered_text += repair.rendered_text;
    combined.prompt_name = base.prompt_name + "+" + repair_record.name;
    combined.prompt_version = repair.prompt_version;
    return combined;
}

InjectionCandidate inject(provider::LlmProvider& llm,
                          const corpus::AssignmentContext& ctx,
                          const corpus::SubmissionFile& file,
                          const corpus::CweEntry& cwe,
                          const std::vector<points::InjectionPoint>& pts,
                          const InjectOptions& options) {
    InjectionCandidate candidate;
    candidate.cwe = cwe;
    candidate.file_path = file.path;
    candidate.language = file.language;
    candidate.original_code = file.content;

    enum class FailKind { Provider, NoOp, Syntax, Behavior };
    FailKind last_fail = FailKind::Provider;
    std::string last_reason = "provider produced no reply";
    std::string last_diagnostics;
    std::string last_code;
    std::string last_prose;

    prompts::PromptBundle base_prompt =
        build_injection_prompt(ctx, file, cwe, pts, options.prompt);

    const bool has_suite = options.suite != nullptr && !options.suite->cases.empty();

    for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
        candidate.attempts = attempt;
        candidate.candidate_id = make_candidate_id(file.path, cwe.id, attempt);

        prompts::PromptBundle prompt =
            attempt == 1 ? base_prompt
                         : build_repair_prompt(base_prompt, options.repair_prompt,
                                               last_reason, last_diagnostics);

        provider::CompletionRequest request{prompt.rendered_text, 8192, 0.0, 0};
        auto started = std::chrono::steady_clock::now();
        provider::CompletionReply reply;
        bool transport_ok = true;
        std::string transport_error;
        try {
            reply = llm.complete(request);
        } catch (const Error& e) {
            transport_ok = false;
            transport_error = e.what();
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        if (options.trace_sink != nullptr) {
            trace::TraceEvent event;
            event.timestamp = trace::rfc3339_utc_now();
            event.stage = trace::Stage::Inject;
            event.agent = "injector";
            event.prompt_name = prompt.prompt_name;
            event.prompt_version = prompt.prompt_version;
            event.subject = candidate.candidate_id;
            event.input_hash = hash::sha256_hex(prompt.rendered_text);
            event.output_hash = transport_ok ? hash::sha256_hex(reply.text) : "";
            event.duration_ms = static_cast<std::uint64_t>(elapsed.count());
            options.trace_sink->push_back(std::move(event));
        }
        if (!transport_ok) {
            last_fail = FailKind::Provider;
            last_reason = "provider transport failure";
            last_diagnostics = transport_error;
            continue;
        }

        std::string code = replytext::extract_code(reply.text);
        std::string prose = replytext::extract_prose(reply.text);
        last_code = code;
        last_prose = prose;

        if (replytext::trim(code) == replytext::trim(file.content)) {
            last_fail = FailKind::NoOp;
            last_reason = "no-op edit";
            last_diagnostics =
                "the reply is identical to the original file; the modified "
                "version must actually contain the flaw";
            continue;
        }

        auto validation = syntax::validate_syntax(code, file.language);
        if (!validation.ok) {
            last_fail = FailKind::Syntax;
            last_reason = "the modified file does not parse";
            last_diagnostics = syntax::format_diagnostics(file.path, validation);
            continue;
        }

        candidate.behavioral_verdict = runner::Verdict::SyntaxOnly;
        if (has_suite) {
            auto report = runner::behavioral_check(file, code, *options.suite,
                                                   *options.proc);
            candidate.behavioral_verdict = report.verdict;
            if (report.verdict == runner::Verdict::Diverged) {
                std::string detail;
                for (const auto& c : report.cases) {
                    if (c.must_pass && !c.agreed) {
                        detail += "case '" + c.name + "': expected exit " +
                                  std::to_string(c.original.exit_code) +
                                  " with output\n" + c.original.stdout_text +
                                  "\nbut the modified file produced exit " +
                                  std::to_string(c.injected.exit_code) +
                                  " with output\n" + c.injected.stdout_text + "\n";
                    }
                }
                last_fail = FailKind::Behavior;
                last_reason = "the modified file changes observable behavior";
                last_diagnostics = detail;
                continue;
            }
        }

        candidate.injected_code = code;
        candidate.rationale = prose;
        candidate.changed_regions = textdiff::changed_regions(
            textdiff::line_diff(file.content, code),
            static_cast<int>(textdiff::split_lines(code).size()));
        candidate.status = Status::Validated;
        candidate.failure_reason.clear();
        return candidate;
    }

    candidate.injected_code = last_code;
    candidate.rationale = last_prose;
    switch (last_fail) {
    case FailKind::NoOp:
        candidate.status = Status::ProviderFailed;
        candidate.failure_reason = "no-op edit";
        break;
    case FailKind::Provider:
        candidate.status = Status::ProviderFailed;
        candidate.failure_reason = last_reason + ": " + last_diagnostics;
        break;
    case FailKind::Syntax:
        candidate.status = Status::SyntaxFailed;
        candidate.failure_reason = last_diagnostics;
        break;
    case FailKind::Behavior:
        candidate.status = Status::BehaviorDiverged;
        candidate.behavioral_verdict = runner::Verdict::Diverged;
        candidate.failure_reason = last_diagnostics;
        break;
    }
    if (!candidate.injected_code.empty() &&
        replytext::trim(candidate.injected_code) !=
            replytext::trim(candidate.original_code)) {
        candidate.changed_regions = textdiff::changed_regions(
            textdiff::line_diff(candidate.original_code, candidate.injected_code),
            static_cast<int>(textdiff::split_lines(candidate.injected_code).size()));
    }
    return candidate;
}

} // namespace cweseed::injector
