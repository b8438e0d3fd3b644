// SPDX-License-Identifier: Apache-2.0
#include "cweseed/replytext.hpp"

#include <cctype>
#include <vector>

namespace cweseed::replytext {

namespace {

struct Fence {
    std::size_t content_begin = 0;
    std::size_t content_end = 0;   // [begin, end)
    std::size_t outer_begin = 0;   // includes the fence lines
    std::size_t outer_end = 0;
};

// ``` fences at line starts; the opening fence may carry a language tag.
std::vector<Fence> find_fences(std::string_view text) {
    std::vector<Fence> fences;
    std::size_t pos = 0;
    bool open = false;
    Fence current;
    while (pos <= text.size()) {
        std::size_t line_end = text.find('\n', pos);
        if (line_end == std::string_view::npos) {
            line_end = text.size();
        }
        std::string_view line = text.substr(pos, line_end - pos);
        std::string_view stripped = line;
        while (!stripped.empty() &&
               (stripped.back() == ' ' || stripped.back() == '\r')) {
            stripped.remove_suffix(1);
        }
        bool is_fence = stripped.size() >= 3 && stripped.substr(0, 3) == "```";
        if (is_fence && !open) {
            open = true;
            current.outer_begin = pos;
            current.content_begin = line_end == text.size() ? line_end : line_end + 1;
        } else if (is_fence && open) {
            current.content_end = pos;
            current.outer_end = line_end == text.size() ? line_end : line_end + 1;
            fences.push_back(current);
            open = false;
        }
        if (line_end == text.size()) {
            break;
        }
        pos = line_end + 1;
    }
    return fences;
}

const Fence* longest_fence(const std::vector<Fence>& fences) {
    const Fence* best = nullptr;
    for (const auto& fence : fences) {
        std::size_t len = fence.content_end - fence.content_begin;
        if (best == nullptr || len > best->content_end - best->content_begin) {
            best = &fence;
        }
    }
    return best;
}

} // namespace

std::string trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return std::string(text);
}

std::string extract_code(std::string_view reply) {
    auto fences = find_fences(reply);
    const Fence* best = longest_fence(fences);
    if (best == nullptr) {
        return trim(reply);
    }
    return std::string(
        reply.substr(best->content_begin, best->content_end - best->content_begin));
}

std::string extract_prose(std::string_view reply) {
    auto fences = find_fences(reply);
    const Fence* best = longest_fence(fences);
    if (best == nullptr) {
        return "";
    }
    std::string prose;
    prose += reply.substr(0, best->outer_begin);
    prose += reply.substr(best->outer_end);
    return trim(prose);
}

std::optional<std::string> extract_json_object(std::string_view reply) {
    std::size_t start = reply.find('{');
    while (start != std::string_view::npos) {
        int depth = 0;
        bool in_string = false;
        for (std::size_t i = start; i < reply.size(); ++i) {
            char c = reply[i];
            if (in_string) {
                if (c == '\\') {
                    ++i;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                --depth;
                if (depth == 0) {
                    return std::string(reply.substr(start, i - start + 1));
                }
            }
        }
        start = reply.find('{', start + 1);
    }
    return std::nullopt;
}

} // namespace cweseed::replytext
