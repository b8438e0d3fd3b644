// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cweseed::replytext {

std::string trim(std::string_view text);

/// Code from a model reply: the longest ``` fenced block (an optional
/// language tag on the opening fence is dropped); with no fences, the whole
/// reply, trimmed.
std::string extract_code(std::string_view reply);

/// The prose left over once the block chosen by extract_code is removed;
/// empty when the reply was all code.
std::string extract_prose(std::string_view reply);

/// First balanced top-level {...} object, brace-matched with awareness of
/// string literals and escapes. Looks inside fenced blocks too.
std::optional<std::string> extract_json_object(std::string_view reply);

} // namespace cweseed::replytext
