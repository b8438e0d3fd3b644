// SPDX-License-Identifier: Apache-2.0
#include "cweseed/prompts.hpp"

#include "cweseed/error.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

namespace cweseed::prompts {

namespace {

// "v12" -> 12; anything else -> -1 (compared lexicographically as fallback).
long version_number(const std::string& version) {
    if (version.size() < 2 || version[0] != 'v') {
        return -1;
    }
    for (std::size_t i = 1; i < version.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(version[i]))) {
            return -1;
        }
    }
    return std::stol(version.substr(1));
}

bool version_less(const std::string& a, const std::string& b) {
    long na = version_number(a), nb = version_number(b);
    if (na >= 0 && nb >= 0) {
        return na < nb;
    }
    return a < b;
}

std::string mtime_rfc3339(const std::filesystem::path& path) {
    std::error_code ec;
    auto ftime = std::filesystem::last_write_time(path, ec);
    if (ec) {
        return "";
    }
    auto sys = std::chrono::time_point_cast<std::chrono::seconds>(
        ftime - std::filesystem::file_time_type::clock::now() +
        std::chrono::system_clock::now());
    std::time_t t = std::chrono::system_clock::to_time_t(sys);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

PromptStore::PromptStore(std::filesystem::path root) : root_(std::move(root)) {}

PromptRecord PromptStore::get(const std::string& name,
                              const std::string& version) const {
    auto dir = root_ / name;
    if (!std::filesystem::is_directory(dir)) {
        throw Error("UnknownPrompt", "no prompt named '" + name + "' under " +
                                         root_.string());
    }
    std::string chosen = version;
    if (version == "latest") {
        std::string best;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
                continue;
            }
            std::string v = entry.path().stem().string();
            if (best.empty() || version_less(best, v)) {
                best = v;
            }
        }
        if (best.empty()) {
            throw Error("UnknownPrompt", "prompt '" + name + "' has no versions");
        }
        chosen = best;
    }
    auto path = dir / (chosen + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("UnknownVersion",
                    "prompt '" + name + "' has no version '" + chosen + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    PromptRecord record;
    record.name = name;
    record.version = chosen;
    record.template_text = buf.str();
    record.created = mtime_rfc3339(path);
    return record;
}

void PromptStore::put(const std::string& name, const std::string& version,
                      const std::string& template_text) const {
    auto dir = root_ / name;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (version + ".txt"), std::ios::binary);
    out.write(template_text.data(),
              static_cast<std::streamsize>(template_text.size()));
}

std::vector<std::pair<std::string, std::string>> PromptStore::list() const {
    std::vector<std::pair<std::string, std::string>> entries;
    if (!std::filesystem::is_directory(root_)) {
        return entries;
    }
    for (const auto& name_dir : std::filesystem::directory_iterator(root_)) {
        if (!name_dir.is_directory()) {
            continue;
        }
        for (const auto& file : std::filesystem::directory_iterator(name_dir.path())) {
            if (file.is_regular_file() && file.path().extension() == ".txt") {
                entries.emplace_back(name_dir.path().filename().string(),
                                     file.path().stem().string());
            }
        }
    }
    std::sort(entries.begin(), entries.end());
    return entries;
}

PromptBundle render(const PromptRecord& record,
                    std::vector<std::pair<std::string, std::string>> variables) {
    // Walk the template once so substituted values are never rescanned
    // (student code may legitimately contain {{...}}).
    const std::string& tmpl = record.template_text;
    std::string text;
    text.reserve(tmpl.size());
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t open = tmpl.find("{{", pos);
        if (open == std::string::npos) {
            text.append(tmpl, pos, std::string::npos);
            break;
        }
        text.append(tmpl, pos, open - pos);
        std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string::npos) {
            throw Error("TemplateVarMissing",
                        "prompt '" + record.name + "' has an unterminated slot");
        }
        std::string slot = tmpl.substr(open + 2, close - open - 2);
        const std::string* value = nullptr;
        for (const auto& [name, v] : variables) {
            if (name == slot) {
                value = &v;
                break;
            }
        }
        if (value == nullptr) {
            throw Error("TemplateVarMissing", "prompt '" + record.name +
                                                  "' slot '" + slot +
                                                  "' has no binding");
        }
        text.append(*value);
        pos = close + 2;
    }
    PromptBundle bundle;
    bundle.prompt_name = record.name;
    bundle.prompt_version = record.version;
    bundle.rendered_text = std::move(text);
    bundle.variables = std::move(variables);
    return bundle;
}

} // namespace cweseed::prompts
