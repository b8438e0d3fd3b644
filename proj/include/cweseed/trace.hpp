// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <span>
#include <string>
#include <string_view>

namespace cweseed::trace {

enum class Stage { Ingest, Inject, Evaluate, Rank, Outcomes, Render };

std::string_view to_string(Stage stage);
int stage_order(Stage stage);

struct TraceEvent {
    std::string timestamp; // RFC 3339 UTC
    Stage stage = Stage::Ingest;
    std::string agent;
    std::string prompt_name;
    std::string prompt_version;
    std::string subject; // candidate_id or submission_id
    std::string input_hash;  // sha256 hex of what went in (prompt text)
    std::string output_hash; // sha256 hex of what came back / was persisted
    std::uint64_t duration_ms = 0;
};

nlohmann::ordered_json to_json(const TraceEvent& event);
TraceEvent event_from_json(const nlohmann::json& doc);

std::string rfc3339_utc_now();

/// Append-only JSON-lines writer; appends are serialized through one mutex.
class TraceWriter {
public:
    explicit TraceWriter(const std::filesystem::path& file);

    void append(const TraceEvent& event);
    void append_all(std::span<const TraceEvent> events);

private:
    std::mutex mutex_;
    std::ofstream out_;
};

} // namespace cweseed::trace
