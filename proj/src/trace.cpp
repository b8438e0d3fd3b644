// SPDX-License-Identifier: Apache-2.0
#include "cweseed/trace.hpp"

#include "cweseed/error.hpp"

#include <chrono>
#include <ctime>

namespace cweseed::trace {

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Inject: return "inject";
    case Stage::Evaluate: return "evaluate";
    case Stage::Rank: return "rank";
    case Stage::Outcomes: return "outcomes";
    case Stage::Render: return "render";
    }
    return "ingest";
}

int stage_order(Stage stage) { return static_cast<int>(stage); }

nlohmann::ordered_json to_json(const TraceEvent& event) {
    return nlohmann::ordered_json{
        {"timestamp", event.timestamp},
        {"stage", std::string(to_string(event.stage))},
        {"agent", event.agent},
        {"prompt_name", event.prompt_name},
        {"prompt_version", event.prompt_version},
        {"subject", event.subject},
        {"input_hash", event.input_hash},
        {"output_hash", event.output_hash},
        {"duration_ms", event.duration_ms},
    };
}

TraceEvent event_from_json(const nlohmann::json& doc) {
    TraceEvent event;
    event.timestamp = doc.value("timestamp", "");
    std::string stage = doc.value("stage", "ingest");
    for (Stage s : {Stage::Ingest, Stage::Inject, Stage::Evaluate, Stage::Rank,
                    Stage::Outcomes, Stage::Render}) {
        if (to_string(s) == stage) {
            event.stage = s;
        }
    }
    event.agent = doc.value("agent", "");
    event.prompt_name = doc.value("prompt_name", "");
    event.prompt_version = doc.value("prompt_version", "");
    event.subject = doc.value("subject", "");
    event.input_hash = doc.value("input_hash", "");
    event.output_hash = doc.value("output_hash", "");
    event.duration_ms = doc.value("duration_ms", std::uint64_t{0});
    return event;
}

std::string rfc3339_utc_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

TraceWriter::TraceWriter(const std::filesystem::path& file) {
    std::filesystem::create_directories(file.parent_path());
    out_.open(file, std::ios::binary | std::ios::app);
    if (!out_) {
        throw Error("TraceUnavailable", "cannot open " + file.string());
    }
}

void TraceWriter::append(const TraceEvent& event) {
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << to_json(event).dump() << '\n';
    out_.flush();
}

void TraceWriter::append_all(std::span<const TraceEvent> events) {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& event : events) {
        out_ << to_json(event).dump() << '\n';
    }
    out_.flush();
}

} // namespace cweseed::trace
