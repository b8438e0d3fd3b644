// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cweseed::prompts {

struct PromptRecord {
    std::string name;
    std::string version; // "v1", "v2", ... ("latest" resolves to the highest)
    std::string template_text;
    std::string created; // RFC 3339, from the file's mtime
};

/// Versioned prompt store over a directory tree: <root>/<name>/<version>.txt.
class PromptStore {
public:
    explicit PromptStore(std::filesystem::path root);

    /// Exact version, or the highest version for "latest".
    /// Errors: UnknownPrompt, UnknownVersion.
    PromptRecord get(const std::string& name,
                     const std::string& version = "latest") const;

    void put(const std::string& name, const std::string& version,
             const std::string& template_text) const;

    std::vector<std::pair<std::string, std::string>> list() const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

struct PromptBundle {
    std::string prompt_name;
    std::string prompt_version;
    std::string rendered_text;
    std::vector<std::pair<std::string, std::string>> variables;
};

/// Substitute every {{var}} slot. A slot with no binding is an error;
/// unused bindings are fine. Errors: TemplateVarMissing.
PromptBundle render(const PromptRecord& record,
                    std::vector<std::pair<std::string, std::string>> variables);

} // namespace cweseed::prompts
