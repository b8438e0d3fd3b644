// SPDX-License-Identifier: Apache-2.0
#include "cweseed/pipeline.hpp"

#include "cweseed/error.hpp"
#include "cweseed/hash.hpp"
#include "cweseed/syntax.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

namespace cweseed::pipeline {

namespace {

std::string timestamp_run_id() {
    std::string stamp = trace::rfc3339_utc_now(); // 2026-01-02T03:04:05Z
    std::string id = "run-";
    for (char c : stamp) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            id.push_back(c);
        }
    }
    return id;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("FileNotFound", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Run fn over [0, count) with at most `jobs` concurrent tasks.
void for_each_indexed(std::size_t count, int jobs,
                      const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::size_t next = 0;
    while (next < count) {
        std::vector<std::future<void>> wave;
        for (int j = 0; j < jobs && next < count; ++j, ++next) {
            wave.push_back(std::async(std::launch::async, fn, next));
        }
        for (auto& task : wave) {
            task.get();
        }
    }
}

} // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("WriteFailed", "cannot open " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::ordered_json to_json(const RunManifest& manifest) {
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const char* key : {"files_selected", "cwes_sampled", "candidates",
                            "validated", "evaluations", "decisions", "outcomes",
                            "html"}) {
        auto it = manifest.counts.find(key);
        counts[key] = it == manifest.counts.end() ? 0 : it->second;
    }
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
    for (const char* key : {"candidates", "evaluations", "ranking", "outcomes",
                            "html"}) {
        auto it = manifest.artifacts.find(key);
        artifacts[key] = it == manifest.artifacts.end()
                             ? std::vector<std::string>{}
                             : it->second;
    }
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : manifest.failures) {
        failures.push_back(nlohmann::ordered_json{{"candidate_id", f.candidate_id},
                                                  {"status", f.status},
                                                  {"reason", f.reason}});
    }
    return nlohmann::ordered_json{
        {"run_id", manifest.run_id},
        {"created", manifest.created},
        {"seed", manifest.seed},
        {"provider_kind", manifest.provider_kind},
        {"submission_id", manifest.submission_id},
        {"counts", std::move(counts)},
        {"artifacts", std::move(artifacts)},
        {"failures", std::move(failures)},
        {"warnings", manifest.warnings},
    };
}

Pipeline::Pipeline(const config::PipelineConfig& config)
    : config_(config), store_(config.prompt_dir) {
    // Ingest. Anything failing here is fatal for the run.
    catalog_ = corpus::load_cwe_catalog(config_.cwe_csv_path);
    ctx_ = corpus::load_context(config_.context_path);
    if (config_.target_file_count) {
        ctx_.target_file_count = *config_.target_file_count;
    }
    if (config_.target_cwe_count) {
        ctx_.target_cwe_count = *config_.target_cwe_count;
    }
    std::vector<std::string> skipped;
    submission_ = corpus::load_submission(config_.submission_root,
                                          config_.submission_id, &skipped);
    for (const auto& path : skipped) {
        warnings_.push_back("skipped (unrecognized extension): " + path);
    }
    heuristics_ = config_.heuristics_path.empty()
                      ? points::HeuristicConfig::defaults()
                      : points::HeuristicConfig::load(config_.heuristics_path);
    if (!config_.smoke_suite_path.empty()) {
        suite_ = runner::load_smoke_suite(config_.smoke_suite_path);
    }
    proc_ = runner::ProcessRunner(
        {.workspace = submission_.root, .timeout = std::chrono::seconds(10)});

    if (config_.dimensions.empty()) {
        config_.dimensions = evaluator::default_dimensions();
    }
    if (config_.weights.entries.empty()) {
        config_.weights = ranker::RankWeights::equal(config_.dimensions);
    }

    provider_ = provider::make_provider(config_.provider);
    if (config_.provider.kind == "scripted" && config_.jobs > 1) {
        warnings_.push_back("scripted provider consumes replies in order; "
                            "forcing jobs=1");
        config_.jobs = 1;
    }

    for (auto which : {schema::StageSchema::Candidate, schema::StageSchema::Evaluation,
                       schema::StageSchema::Ranking, schema::StageSchema::Outcomes,
                       schema::StageSchema::Manifest}) {
        schemas_[which] = schema::load_schema(config_.schema_dir, which);
    }

    std::string run_id = config_.run_id.empty() ? timestamp_run_id() : config_.run_id;
    run_dir_ = config_.output_dir / run_id;
    std::filesystem::create_directories(run_dir_);
    for (const char* sub : {"candidates", "evaluations", "ranking", "outcomes",
                            "html"}) {
        std::filesystem::create_directories(run_dir_ / sub);
    }
    tracer_ = std::make_unique<trace::TraceWriter>(run_dir_ / "trace.jsonl");

    std::string ingest_identity = submission_.submission_id;
    for (const auto& file : submission_.files) {
        ingest_identity += ";" + file.path;
    }
    trace::TraceEvent event;
    event.timestamp = trace::rfc3339_utc_now();
    event.stage = trace::Stage::Ingest;
    event.agent = "controller";
    event.subject = submission_.submission_id;
    event.input_hash = hash::sha256_hex(ingest_identity);
    tracer_->append(event);
}

std::string Pipeline::write_stage_artifact(const std::string& stage,
                                           const std::filesystem::path& relative,
                                           const nlohmann::ordered_json& doc,
                                           schema::StageSchema which) {
    std::string bytes = doc.dump(2);
    bytes.push_back('\n');
    auto violations = schema::validate_stage_output(bytes, schemas_.at(which));
    if (!violations.empty()) {
        throw Error("StageSchemaViolation",
                    "stage " + stage + ", artifact " + relative.generic_string() +
                        ", pointer " + violations.front().pointer + ": " +
                        violations.front().message);
    }
    write_file_atomic(run_dir_ / relative, bytes);
    return relative.generic_string();
}

void Pipeline::select_targets() {
    // Only files with a registered grammar can pass the validation gates.
    corpus::StudentSubmission parseable = submission_;
    parseable.files.clear();
    for (const auto& file : submission_.files) {
        if (syntax::supported(file.language)) {
            parseable.files.push_back(file);
        } else {
            warnings_.push_back("excluded (no grammar for " +
                                std::string(corpus::to_string(file.language)) +
                                "): " + file.path);
        }
    }
    if (parseable.files.empty()) {
        throw Error("EmptySubmission", "no file has a registered grammar");
    }
    auto selection = corpus::select_target_files(parseable, ctx_.target_file_count);
    if (selection.short_submission) {
        warnings_.push_back("submission has fewer files than requested: took " +
                            std::to_string(selection.files.size()));
    }
    selected_files_ = std::move(selection.files);
    sampled_cwes_ = corpus::sample_cwes(catalog_, ctx_.instructor_cwe_ids,
                                        ctx_.target_cwe_count, config_.seed);
}

void Pipeline::persist_candidate(const injector::InjectionCandidate& candidate) {
    write_stage_artifact("candidates",
                         std::filesystem::path("candidates") /
                             (candidate.candidate_id + ".json"),
                         injector::to_json(candidate), schema::StageSchema::Candidate);
}

void Pipeline::inject_stage() {
    struct Pair {
        const corpus::SubmissionFile* file;
        const corpus::CweEntry* cwe;
    };
    std::vector<Pair> pairs;
    for (const auto& file : selected_files_) {
        for (const auto& cwe : sampled_cwes_) {
            pairs.push_back({&file, &cwe});
        }
    }

    prompts::PromptRecord inject_prompt = store_.get("injector");
    prompts::PromptRecord repair_prompt = store_.get("injector_repair");

    std::vector<injector::InjectionCandidate> results(pairs.size());
    std::vector<std::vector<trace::TraceEvent>> events(pairs.size());
    std::vector<std::string> point_warnings(pairs.size());

    for_each_indexed(pairs.size(), config_.jobs, [&](std::size_t i) {
        const auto& [file, cwe] = pairs[i];
        std::vector<points::InjectionPoint> pts;
        auto tree = syntax::parse(*file);
        if (tree.clean()) {
            pts = points::discover_injection_points(tree, *file, heuristics_);
        } else {
            point_warnings[i] = "original file " + file->path +
                                " has parse errors; prompting with free placement";
        }
        injector::InjectOptions options;
        options.max_attempts = config_.max_attempts;
        options.prompt = inject_prompt;
        options.repair_prompt = repair_prompt;
        options.suite = &suite_;
        options.proc = &proc_;
        options.trace_sink = &events[i];
        results[i] = injector::inject(*provider_, ctx_, *file, *cwe, pts, options);
    });

    for (const auto& w : point_warnings) {
        if (!w.empty()) {
            warnings_.push_back(w);
        }
    }

    // Persist and trace in candidate_id order so output is deterministic
    // regardless of fan-out.
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return results[a].candidate_id < results[b].candidate_id;
    });
    std::vector<trace::TraceEvent> merged;
    for (std::size_t i : order) {
        for (auto& event : events[i]) {
            merged.push_back(std::move(event));
        }
    }
    tracer_->append_all(merged);
    for (std::size_t i : order) {
        persist_candidate(results[i]);
        if (results[i].status != injector::Status::Validated) {
            failures_.push_back({results[i].candidate_id,
                                 std::string(injector::to_string(results[i].status)),
                                 results[i].failure_reason});
        }
        candidates_.push_back(std::move(results[i]));
    }
}

void Pipeline::evaluate_stage() {
    prompts::PromptRecord eval_prompt = store_.get("evaluator");
    prompts::PromptRecord repair_prompt = store_.get("evaluator_repair");

    std::vector<const injector::InjectionCandidate*> validated;
    for (const auto& candidate : candidates_) {
        if (candidate.status == injector::Status::Validated) {
            validated.push_back(&candidate);
        }
    }
    std::sort(validated.begin(), validated.end(),
              [](const auto* a, const auto* b) {
                  return a->candidate_id < b->candidate_id;
              });

    std::vector<std::optional<evaluator::EvaluationReport>> results(validated.size());
    std::vector<std::vector<trace::TraceEvent>> events(validated.size());
    std::vector<std::string> errors(validated.size());

    for_each_indexed(validated.size(), config_.jobs, [&](std::size_t i) {
        evaluator::EvaluateOptions options;
        options.prompt = eval_prompt;
        options.repair_prompt = repair_prompt;
        options.dimensions = config_.dimensions;
        options.trace_sink = &events[i];
        try {
            results[i] = evaluator::evaluate(*provider_, *validated[i], ctx_, options);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    std::vector<trace::TraceEvent> merged;
    for (auto& group : events) {
        for (auto& event : group) {
            merged.push_back(std::move(event));
        }
    }
    tracer_->append_all(merged);

    for (std::size_t i = 0; i < validated.size(); ++i) {
        if (!results[i].has_value()) {
            failures_.push_back({validated[i]->candidate_id, "evaluation_failed",
                                 errors[i]});
            continue;
        }
        write_stage_artifact("evaluations",
                             std::filesystem::path("evaluations") /
                                 (results[i]->candidate_id + ".json"),
                             evaluator::to_json(*results[i]),
                             schema::StageSchema::Evaluation);
        reports_.push_back(std::move(*results[i]));
    }
}

void Pipeline::rank_stage() {
    if (reports_.empty()) {
        warnings_.push_back("no evaluated candidates; skipping ranking");
        return;
    }
    ranker::RankOptions options;
    options.weights = config_.weights;
    options.prompt = store_.get("ranker");
    options.llm_override = config_.llm_override;
    std::vector<trace::TraceEvent> events;
    options.trace_sink = &events;
    decision_ = ranker::rank(*provider_, submission_.submission_id, candidates_,
                             reports_, ctx_, options);
    tracer_->append_all(events);
    write_stage_artifact("ranking",
                         std::filesystem::path("ranking") /
                             (submission_.submission_id + ".json"),
                         ranker::to_json(*decision_), schema::StageSchema::Ranking);
}

void Pipeline::outcomes_stage() {
    if (!decision_.has_value()) {
        return;
    }
    const injector::InjectionCandidate* chosen = nullptr;
    for (const auto& candidate : candidates_) {
        if (candidate.candidate_id == decision_->chosen) {
            chosen = &candidate;
        }
    }
    if (chosen == nullptr) {
        warnings_.push_back("chosen candidate " + decision_->chosen +
                            " not present; skipping outcomes");
        return;
    }
    const evaluator::EvaluationReport* report = nullptr;
    for (const auto& r : reports_) {
        if (r.candidate_id == decision_->chosen) {
            report = &r;
        }
    }
    outcomes::OutcomesOptions options;
    options.prompt = store_.get("outcomes");
    options.repair_prompt = store_.get("outcomes_repair");
    std::vector<trace::TraceEvent> events;
    options.trace_sink = &events;
    try {
        artifact_ = outcomes::generate_outcomes(*provider_, *decision_, *chosen,
                                                report, ctx_, options);
    } catch (const Error& e) {
        tracer_->append_all(events);
        failures_.push_back({decision_->chosen, "outcomes_failed", e.what()});
        warnings_.push_back("learning artifact generation failed: " +
                            std::string(e.what()));
        return;
    }
    tracer_->append_all(events);
    write_stage_artifact("outcomes",
                         std::filesystem::path("outcomes") /
                             (submission_.submission_id + ".json"),
                         outcomes::to_json(*artifact_), schema::StageSchema::Outcomes);
}

void Pipeline::render_stage(html::RenderMode mode_for_unchosen) {
    std::vector<trace::TraceEvent> events;
    for (auto& candidate : candidates_) {
        if (candidate.status != injector::Status::Validated) {
            continue;
        }
        bool chosen = decision_.has_value() && decision_->chosen == candidate.candidate_id;

        auto emit = [&](html::RenderMode mode,
                        const std::optional<outcomes::LearningArtifact>& artifact) {
            html::HtmlArtifact doc = html::render_candidate_html(candidate, artifact, mode);
            std::string name = candidate.candidate_id + "." +
                               std::string(html::to_string(mode)) + ".html";
            write_file_atomic(run_dir_ / "html" / name, doc.document);
            candidate.html = "html/" + name;

            trace::TraceEvent event;
            event.timestamp = trace::rfc3339_utc_now();
            event.stage = trace::Stage::Render;
            event.agent = "renderer";
            event.subject = candidate.candidate_id;
            event.input_hash = hash::sha256_hex(candidate.injected_code);
            event.output_hash = hash::sha256_hex(doc.document);
            events.push_back(std::move(event));
        };

        if (mode_for_unchosen == html::RenderMode::Challenge) {
            emit(html::RenderMode::Challenge, std::nullopt);
            if (chosen && artifact_.has_value()) {
                emit(html::RenderMode::Explained, artifact_);
            }
        } else if (chosen && artifact_.has_value()) {
            emit(html::RenderMode::Explained, artifact_);
        } else {
            warnings_.push_back("no learning artifact for " +
                                candidate.candidate_id +
                                "; skipped explained render");
            continue;
        }
        // The candidate record now references its rendered form.
        persist_candidate(candidate);
    }
    std::sort(events.begin(), events.end(),
              [](const trace::TraceEvent& a, const trace::TraceEvent& b) {
                  return a.subject < b.subject;
              });
    tracer_->append_all(events);
}

RunResult Pipeline::finish() {
    RunManifest manifest;
    manifest.run_id = run_dir_.filename().string();
    manifest.created = trace::rfc3339_utc_now();
    manifest.seed = config_.seed;
    manifest.provider_kind = provider_->kind();
    manifest.submission_id = submission_.submission_id;

    auto list_dir = [&](const char* sub) {
        std::vector<std::string> names;
        auto dir = run_dir_ / sub;
        if (std::filesystem::is_directory(dir)) {
            for (const auto& entry : std::filesystem::directory_iterator(dir)) {
                if (entry.is_regular_file()) {
                    names.push_back(std::string(sub) + "/" +
                                    entry.path().filename().string());
                }
            }
        }
        std::sort(names.begin(), names.end());
        return names;
    };
    manifest.artifacts["candidates"] = list_dir("candidates");
    manifest.artifacts["evaluations"] = list_dir("evaluations");
    manifest.artifacts["ranking"] = list_dir("ranking");
    manifest.artifacts["outcomes"] = list_dir("outcomes");
    manifest.artifacts["html"] = list_dir("html");

    int validated = 0;
    for (const auto& candidate : candidates_) {
        if (candidate.status == injector::Status::Validated) {
            ++validated;
        }
    }
    manifest.counts["files_selected"] = static_cast<int>(selected_files_.size());
    manifest.counts["cwes_sampled"] = static_cast<int>(sampled_cwes_.size());
    if (selected_files_.empty()) {
        // Resumed stage: selection happened in an earlier process; keep the
        // previous manifest's selection counts.
        auto previous = run_dir_ / "manifest.json";
        if (std::filesystem::exists(previous)) {
            auto doc = nlohmann::json::parse(slurp(previous));
            manifest.counts["files_selected"] =
                doc.value("counts", nlohmann::json::object())
                    .value("files_selected", 0);
            manifest.counts["cwes_sampled"] =
                doc.value("counts", nlohmann::json::object())
                    .value("cwes_sampled", 0);
        }
    }
    manifest.counts["candidates"] =
        static_cast<int>(manifest.artifacts["candidates"].size());
    manifest.counts["validated"] = validated;
    manifest.counts["evaluations"] =
        static_cast<int>(manifest.artifacts["evaluations"].size());
    manifest.counts["decisions"] =
        static_cast<int>(manifest.artifacts["ranking"].size());
    manifest.counts["outcomes"] =
        static_cast<int>(manifest.artifacts["outcomes"].size());
    manifest.counts["html"] = static_cast<int>(manifest.artifacts["html"].size());
    manifest.failures = failures_;
    manifest.warnings = warnings_;

    write_stage_artifact("manifest", "manifest.json", to_json(manifest),
                         schema::StageSchema::Manifest);
    return {std::move(manifest), run_dir_, run_dir_ / "manifest.json"};
}

RunResult Pipeline::run() {
    select_targets();
    inject_stage();
    evaluate_stage();
    rank_stage();
    outcomes_stage();
    render_stage();
    return finish();
}

RunResult Pipeline::run_inject_only() {
    select_targets();
    inject_stage();
    return finish();
}

void Pipeline::load_candidates_from_disk() {
    candidates_.clear();
    auto dir = run_dir_ / "candidates";
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        candidates_.push_back(
            injector::candidate_from_json(nlohmann::json::parse(slurp(file))));
        const auto& candidate = candidates_.back();
        if (candidate.status != injector::Status::Validated) {
            failures_.push_back({candidate.candidate_id,
                                 std::string(injector::to_string(candidate.status)),
                                 candidate.failure_reason});
        }
    }
}

void Pipeline::load_reports_from_disk() {
    reports_.clear();
    auto dir = run_dir_ / "evaluations";
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        reports_.push_back(
            evaluator::report_from_json(nlohmann::json::parse(slurp(file))));
    }
}

void Pipeline::load_decision_from_disk() {
    auto path = run_dir_ / "ranking" / (submission_.submission_id + ".json");
    if (std::filesystem::exists(path)) {
        decision_ = ranker::decision_from_json(nlohmann::json::parse(slurp(path)));
    }
}

void Pipeline::load_artifact_from_disk() {
    auto path = run_dir_ / "outcomes" / (submission_.submission_id + ".json");
    if (std::filesystem::exists(path)) {
        artifact_ = outcomes::artifact_from_json(nlohmann::json::parse(slurp(path)));
    }
}

RunResult Pipeline::resume_evaluate() {
    load_candidates_from_disk();
    evaluate_stage();
    return finish();
}

RunResult Pipeline::resume_rank() {
    load_candidates_from_disk();
    load_reports_from_disk();
    rank_stage();
    return finish();
}

RunResult Pipeline::resume_outcomes() {
    load_candidates_from_disk();
    load_reports_from_disk();
    load_decision_from_disk();
    if (!decision_.has_value()) {
        throw Error("MissingStage", "no ranking decision in " + run_dir_.string());
    }
    outcomes_stage();
    return finish();
}

RunResult Pipeline::resume_render(html::RenderMode mode_for_unchosen) {
    load_candidates_from_disk();
    load_reports_from_disk();
    load_decision_from_disk();
    load_artifact_from_disk();
    render_stage(mode_for_unchosen);
    return finish();
}

std::vector<std::pair<std::string, schema::Violation>> validate_run_dir(
    const std::filesystem::path& run_dir, const std::filesystem::path& schema_dir) {
    std::vector<std::pair<std::string, schema::Violation>> findings;
    auto check_dir = [&](const char* sub, schema::StageSchema which) {
        auto schema_doc = schema::load_schema(schema_dir, which);
        auto dir = run_dir / sub;
        if (!std::filesystem::is_directory(dir)) {
            return;
        }
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            for (const auto& violation :
                 schema::validate_stage_output(slurp(file), schema_doc)) {
                findings.emplace_back(
                    std::string(sub) + "/" + file.filename().string(), violation);
            }
        }
    };
    check_dir("candidates", schema::StageSchema::Candidate);
    check_dir("evaluations", schema::StageSchema::Evaluation);
    check_dir("ranking", schema::StageSchema::Ranking);
    check_dir("outcomes", schema::StageSchema::Outcomes);
    auto manifest = run_dir / "manifest.json";
    if (std::filesystem::exists(manifest)) {
        auto schema_doc = schema::load_schema(schema_dir, schema::StageSchema::Manifest);
        for (const auto& violation :
             schema::validate_stage_output(slurp(manifest), schema_doc)) {
            findings.emplace_back("manifest.json", violation);
        }
    }
    return findings;
}

} // namespace cweseed::pipeline
