// SPDX-License-Identifier: Apache-2.0
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "cweseed/provider.hpp"

#include "cweseed/error.hpp"
#include "cweseed/hash.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace cweseed::provider {

std::string request_hash(const CompletionRequest& request) {
    return hash::sha256_hex(request.prompt);
}

ReplayProvider::ReplayProvider(std::filesystem::path dir) : dir_(std::move(dir)) {}

CompletionReply ReplayProvider::complete(const CompletionRequest& request) {
    auto path = dir_ / (request_hash(request) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("ReplayMiss", "no recorded reply at " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return {buf.str()};
}

ScriptedProvider::ScriptedProvider(std::vector<std::string> replies)
    : replies_(std::move(replies)) {}

std::vector<std::string> load_reply_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error("BadProviderSpec", dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> replies;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        replies.push_back(buf.str());
    }
    return replies;
}

CompletionReply ScriptedProvider::complete(const CompletionRequest&) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (next_ >= replies_.size()) {
        throw Error("ScriptExhausted",
                    "scripted provider ran out of replies after " +
                        std::to_string(replies_.size()));
    }
    return {replies_[next_++]};
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return replies_.size() - next_;
}

RecordingProvider::RecordingProvider(std::unique_ptr<LlmProvider> inner,
                                     std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

CompletionReply RecordingProvider::complete(const CompletionRequest& request) {
    CompletionReply reply = inner_->complete(request);
    auto tmp = dir_ / (request_hash(request) + ".txt.tmp");
    auto final_path = dir_ / (request_hash(request) + ".txt");
    {
        std::ofstream out(tmp, std::ios::binary);
        out.write(reply.text.data(), static_cast<std::streamsize>(reply.text.size()));
    }
    std::filesystem::rename(tmp, final_path);
    return reply;
}

std::string RecordingProvider::kind() const {
    return inner_->kind() + "+record";
}

LiveProvider::LiveProvider(Options options) : options_(std::move(options)) {}

CompletionReply LiveProvider::complete(const CompletionRequest& request) {
    nlohmann::json body{
        {"model", options_.model},
        {"messages",
         nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
        {"max_tokens", request.max_tokens},
        {"temperature", request.temperature},
        {"seed", request.seed},
    };
    const char* key = std::getenv(options_.api_key_env.c_str());

    std::string last_error;
    for (int attempt = 0; attempt <= options_.transport_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::seconds(1 << (attempt - 1)));
        }
        httplib::Client client(options_.endpoint);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        httplib::Headers headers;
        if (key != nullptr && *key != '\0') {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
        auto res = client.Post(options_.path, headers, body.dump(),
                               "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "http status " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500 && res->status != 429) {
                break; // client errors do not retry
            }
            continue;
        }
        try {
            nlohmann::json doc = nlohmann::json::parse(res->body);
            return {doc.at("choices").at(0).at("message").at("content")
                        .get<std::string>()};
        } catch (const std::exception& e) {
            throw Error("ProviderReply",
                        std::string("cannot parse completion response: ") + e.what());
        }
    }
    throw Error("ProviderUnavailable", last_error.empty() ? "no attempts made"
                                                          : last_error);
}

std::unique_ptr<LlmProvider> make_provider(const ProviderSpec& spec) {
    std::unique_ptr<LlmProvider> base;
    if (spec.kind == "replay") {
        if (spec.replay_dir.empty()) {
            throw Error("BadProviderSpec", "replay provider needs replay_dir");
        }
        base = std::make_unique<ReplayProvider>(spec.replay_dir);
    } else if (spec.kind == "scripted") {
        if (spec.script_dir.empty()) {
            throw Error("BadProviderSpec", "scripted provider needs script_dir");
        }
        base = std::make_unique<ScriptedProvider>(
            load_reply_directory(spec.script_dir));
    } else if (spec.kind == "live") {
        if (spec.endpoint.empty()) {
            throw Error("BadProviderSpec", "live provider needs an endpoint");
        }
        LiveProvider::Options options;
        options.endpoint = spec.endpoint;
        options.model = spec.model;
        options.api_key_env = spec.api_key_env;
        base = std::make_unique<LiveProvider>(std::move(options));
    } else {
        throw Error("BadProviderSpec", "unknown provider kind '" + spec.kind + "'");
    }
    if (!spec.record_dir.empty()) {
        base = std::make_unique<RecordingProvider>(std::move(base), spec.record_dir);
    }
    return base;
}

} // namespace cweseed::provider
