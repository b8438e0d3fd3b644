// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace cweseed::hash {

/// SHA-256 of the input, returned as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

} // namespace cweseed::hash
