// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cweseed {

/// Exception carrying a stable machine-readable code alongside the message.
/// Codes are short PascalCase tags such as "DuplicateId" or "UnknownPrompt";
/// callers that need to branch on failure class match on code(), not what().
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace cweseed
