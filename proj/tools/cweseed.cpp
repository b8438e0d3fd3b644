// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: full pipeline runs, per-stage entry points, run
// validation and the survey statistics table.
//
// Exit codes: 0 success, 1 usage error, 2 pipeline failure, 3 schema
// violation.
#include "cweseed/config.hpp"
#include "cweseed/error.hpp"
#include "cweseed/pipeline.hpp"
#include "cweseed/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitSchema = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets; // raw key=value overrides
    std::string seed;
    std::string provider_kind;
    std::string out_dir;
    std::string weights; // "relevance=2,naturalness=1"
    std::string run_dir; // stage commands
};

std::vector<std::pair<std::string, std::string>> collect_overrides(
    const CommonArgs& args) {
    std::vector<std::pair<std::string, std::string>> overrides;
    auto split_kv = [](const std::string& item)
        -> std::pair<std::string, std::string> {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw cweseed::Error("UnknownOverride",
                                 "expected key=value, got '" + item + "'");
        }
        return {item.substr(0, eq), item.substr(eq + 1)};
    };
    for (const auto& item : args.sets) {
        overrides.push_back(split_kv(item));
    }
    if (!args.seed.empty()) {
        overrides.emplace_back("seed", args.seed);
    }
    if (!args.provider_kind.empty()) {
        overrides.emplace_back("provider.kind", args.provider_kind);
    }
    if (!args.out_dir.empty()) {
        overrides.emplace_back("output_dir", args.out_dir);
    }
    if (!args.weights.empty()) {
        std::size_t start = 0;
        while (start <= args.weights.size()) {
            std::size_t comma = args.weights.find(',', start);
            std::string item = args.weights.substr(
                start, comma == std::string::npos ? std::string::npos
                                                  : comma - start);
            if (!item.empty()) {
                auto [k, v] = split_kv(item);
                overrides.emplace_back("weights." + k, v);
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return overrides;
}

cweseed::config::PipelineConfig load_config(const CommonArgs& args,
                                            bool attach_run_dir) {
    auto config = cweseed::config::resolve_config(args.config_path,
                                                  collect_overrides(args));
    if (attach_run_dir) {
        if (args.run_dir.empty()) {
            throw cweseed::Error("UnknownOverride",
                                 "this command needs --run <run-dir>");
        }
        std::filesystem::path run(args.run_dir);
        config.output_dir = run.parent_path().empty()
                                ? std::filesystem::path(".")
                                : run.parent_path();
        config.run_id = run.filename().string();
    }
    return config;
}

int exit_code_for(const cweseed::Error& e) {
    return e.code() == "StageSchemaViolation" ? kExitSchema : kExitPipeline;
}

int report_result(const cweseed::pipeline::RunResult& result) {
    std::cout << result.manifest_path.string() << "\n";
    if (!result.manifest.failures.empty()) {
        std::cerr << result.manifest.failures.size()
                  << " candidate(s) failed validation; see manifest\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CWE seeding pipeline for personalized secure-coding review"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string survey_path;
    double alpha = 0.05;
    bool stats_csv = false;
    std::string render_mode = "challenge";
    std::string validate_dir;
    std::string schema_dir = "schemas";

    auto add_common = [&](CLI::App* cmd, bool needs_run) {
        cmd->add_option("--config", args.config_path, "pipeline config file")
            ->required();
        cmd->add_option("--set", args.sets,
                        "override a config field (key=value, repeatable)");
        cmd->add_option("--seed", args.seed, "sampling seed override");
        cmd->add_option("--provider", args.provider_kind,
                        "provider kind: live|replay|scripted");
        cmd->add_option("--out", args.out_dir, "output directory override");
        cmd->add_option("--weights", args.weights,
                        "ranking weights, e.g. relevance=2,naturalness=1");
        if (needs_run) {
            cmd->add_option("--run", args.run_dir, "existing run directory")
                ->required();
        }
    };

    CLI::App* cmd_run = app.add_subcommand("run", "execute the full pipeline");
    add_common(cmd_run, false);
    CLI::App* cmd_inject =
        app.add_subcommand("inject", "ingest and run the injection stage only");
    add_common(cmd_inject, false);
    CLI::App* cmd_eval = app.add_subcommand(
        "evaluate", "score validated candidates in an existing run");
    add_common(cmd_eval, true);
    CLI::App* cmd_rank =
        app.add_subcommand("rank", "rank evaluated candidates in an existing run");
    add_common(cmd_rank, true);
    CLI::App* cmd_outcomes = app.add_subcommand(
        "outcomes", "generate the learning artifact for the chosen candidate");
    add_common(cmd_outcomes, true);
    CLI::App* cmd_render =
        app.add_subcommand("render", "render HTML artifacts for an existing run");
    add_common(cmd_render, true);
    cmd_render->add_option("--mode", render_mode, "challenge|explained")
        ->check(CLI::IsMember({"challenge", "explained"}));

    CLI::App* cmd_stats =
        app.add_subcommand("stats", "survey significance table from a CSV");
    cmd_stats->add_option("--survey", survey_path, "CSV with item,group,response")
        ->required();
    cmd_stats->add_option("--alpha", alpha, "significance level (default 0.05)");
    cmd_stats->add_flag("--csv", stats_csv, "emit CSV instead of aligned text");

    CLI::App* cmd_validate = app.add_subcommand(
        "validate", "validate every artifact in a run directory");
    cmd_validate->add_option("run_dir", validate_dir, "run directory")->required();
    cmd_validate->add_option("--schemas", schema_dir, "schema directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (cmd_run->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, false));
            return report_result(pipe.run());
        }
        if (cmd_inject->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, false));
            return report_result(pipe.run_inject_only());
        }
        if (cmd_eval->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, true));
            return report_result(pipe.resume_evaluate());
        }
        if (cmd_rank->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, true));
            return report_result(pipe.resume_rank());
        }
        if (cmd_outcomes->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, true));
            return report_result(pipe.resume_outcomes());
        }
        if (cmd_render->parsed()) {
            cweseed::pipeline::Pipeline pipe(load_config(args, true));
            auto mode = render_mode == "explained"
                            ? cweseed::html::RenderMode::Explained
                            : cweseed::html::RenderMode::Challenge;
            return report_result(pipe.resume_render(mode));
        }
        if (cmd_stats->parsed()) {
            auto datasets = cweseed::stats::load_survey_csv(survey_path);
            auto rows = cweseed::stats::significance_table(datasets, alpha);
            std::cout << (stats_csv ? cweseed::stats::format_table_csv(rows)
                                    : cweseed::stats::format_table_text(rows));
            return kExitOk;
        }
        if (cmd_validate->parsed()) {
            auto findings = cweseed::pipeline::validate_run_dir(validate_dir,
                                                                schema_dir);
            if (findings.empty()) {
                std::cout << "ok: every artifact conforms to its stage schema\n";
                return kExitOk;
            }
            for (const auto& [artifact, violation] : findings) {
                std::cerr << artifact << ": " << violation.pointer << ": "
                          << violation.message << "\n";
            }
            return kExitSchema;
        }
    } catch (const cweseed::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitUsage;
}
