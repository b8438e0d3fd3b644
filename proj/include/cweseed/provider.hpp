// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace cweseed::provider {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 4096;
    double temperature = 0.0;
    std::uint64_t seed = 0;
};

struct CompletionReply {
    std::string text;
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    virtual CompletionReply complete(const CompletionRequest& request) = 0;
    virtual std::string kind() const = 0;
};

/// SHA-256 of the prompt text. Sampling parameters are excluded on purpose:
/// recorded replies stay valid when max_tokens or temperature are tuned.
std::string request_hash(const CompletionRequest& request);

/// Replies served from <dir>/<request_hash>.txt — a pure function of the
/// request hash. Errors: ReplayMiss (no recording for this prompt).
class ReplayProvider final : public LlmProvider {
public:
    explicit ReplayProvider(std::filesystem::path dir);
    CompletionReply complete(const CompletionRequest& request) override;
    std::string kind() const override { return "replay"; }

private:
    std::filesystem::path dir_;
};

/// Fixed FIFO of replies, consumed one per call. Loadable from a directory
/// (files in lexicographic order) or given inline.
/// Errors: ScriptExhausted.
class ScriptedProvider final : public LlmProvider {
public:
    explicit ScriptedProvider(std::vector<std::string> replies);
    CompletionReply complete(const CompletionRequest& request) override;
    std::string kind() const override { return "scripted"; }

    std::size_t remaining() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

/// Reply files from a directory in lexicographic filename order.
std::vector<std::string> load_reply_directory(const std::filesystem::path& dir);

/// Tees every (request, reply) pair through to <dir>/<request_hash>.txt so a
/// later run can replay it offline.
class RecordingProvider final : public LlmProvider {
public:
    RecordingProvider(std::unique_ptr<LlmProvider> inner, std::filesystem::path dir);
    CompletionReply complete(const CompletionRequest& request) override;
    std::string kind() const override;

private:
    std::unique_ptr<LlmProvider> inner_;
    std::filesystem::path dir_;
};

/// Single HTTP chat-completion endpoint. API key read from the named
/// environment variable; 60 s request timeout; 2 transport retries with
/// exponential backoff. Errors: ProviderUnavailable, ProviderReply.
class LiveProvider final : public LlmProvider {
public:
    struct Options {
        std::string endpoint; // e.g. "https://api.example.com"
        std::string path = "/v1/chat/completions";
        std::string model;
        std::string api_key_env = "CWESEED_API_KEY";
        int timeout_seconds = 60;
        int transport_retries = 2;
    };
    explicit LiveProvider(Options options);
    CompletionReply complete(const CompletionRequest& request) override;
    std::string kind() const override { return "live"; }

private:
    Options options_;
};

struct ProviderSpec {
    std::string kind = "replay"; // live | replay | scripted
    std::string endpoint;
    std::string model;
    std::filesystem::path replay_dir;
    std::filesystem::path script_dir;
    std::filesystem::path record_dir; // optional: wrap with a recorder
    std::string api_key_env = "CWESEED_API_KEY";
};

/// Errors: BadProviderSpec.
std::unique_ptr<LlmProvider> make_provider(const ProviderSpec& spec);

} // namespace cweseed::provider
